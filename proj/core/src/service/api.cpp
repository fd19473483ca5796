#include "convoscope/service/api.hpp"

#include <charconv>
#include <chrono>
#include <json.hpp>

#include "convoscope/analytics/aggregates.hpp"
#include "convoscope/common/errors.hpp"
#include "convoscope/phrase/search.hpp"

namespace convoscope {

namespace {

using Json = nlohmann::ordered_json;

ApiResponse json_response(const Json& body, int status = 200) {
  return {status, "application/json", body.dump()};
}

ApiResponse error_response(int status, std::string_view code, std::string_view message, Json extra = {}) {
  Json body;
  body["error"] = code;
  body["message"] = message;
  if (extra.is_object())
    for (auto& [key, value] : extra.items()) body[key] = value;
  return json_response(body, status);
}

const std::string* query_param(const std::map<std::string, std::string>& query, const std::string& name) {
  auto it = query.find(name);
  return it == query.end() ? nullptr : &it->second;
}

double parse_double_param(const std::string& name, const std::string& text) {
  double value = 0.0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || ptr != text.data() + text.size())
    throw InvalidInputError("parameter '" + name + "' is not a number: '" + text + "'");
  return value;
}

std::uint64_t parse_uint_param(const std::string& name, const std::string& text) {
  std::uint64_t value = 0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || ptr != text.data() + text.size())
    throw InvalidInputError("parameter '" + name + "' is not a non-negative integer: '" + text + "'");
  return value;
}

bool parse_bool_param(const std::string& name, const std::string& text) {
  if (text == "true" || text == "1") return true;
  if (text == "false" || text == "0" || text.empty()) return false;
  throw InvalidInputError("parameter '" + name + "' must be true or false");
}

Json bins_json(const SentimentBinCounts& bins) { return Json(std::vector<std::size_t>(bins.begin(), bins.end())); }

Json distribution_json(const SentimentDistribution& d) {
  return Json(std::vector<double>(d.proportions.begin(), d.proportions.end()));
}

Json features_json(const PatientFeatures& features) {
  Json j = Json::object();
  for (auto name : kFacetNames) j[std::string(name)] = features.value(name);
  return j;
}

Json catalog_entry_json(const TopicCatalogEntry& entry) {
  Json j;
  j["id"] = entry.id;
  j["label"] = entry.label;
  j["parent"] = entry.parent_id ? Json(*entry.parent_id) : Json(nullptr);
  j["kind"] = to_string(entry.kind);
  return j;
}

Json overview(const Snapshot& snap, const FilterSelection& selection, bool include_context) {
  const auto& index = snap.index;
  Bitset focused = apply_selection(index, selection, snap.phrase_resolver());
  Json topics = Json::array();
  std::vector<const Bitset*> rows;
  for (const auto& entry : snap.catalog) {
    topics.push_back(catalog_entry_json(entry));
    rows.push_back(index.topic(entry.id));
  }
  Json entries = Json::array();
  for (std::size_t pos : index.chronological()) {
    bool in_focus = focused.test(pos);
    if (!in_focus && !include_context) continue;
    const auto& view = snap.views[pos];
    Json e;
    e["id"] = index.conversation_ids()[pos];
    e["start_time"] = format_iso8601(index.start_time(pos));
    e["focused"] = in_focus;
    std::vector<int> presence;
    presence.reserve(rows.size());
    for (const auto* row : rows) presence.push_back(row->test(pos) ? 1 : 0);
    e["topics"] = presence;
    e["sentiment"] = distribution_json(view.distribution);
    e["features"] = features_json(index.features(pos));
    entries.push_back(std::move(e));
  }
  Json out;
  out["topics"] = std::move(topics);
  out["total"] = index.universe();
  out["focused"] = focused.count();
  out["include_context"] = include_context;
  out["entries"] = std::move(entries);
  return out;
}

Json facets(const Snapshot& snap, const FilterSelection& selection) {
  auto resolver = snap.phrase_resolver();
  Json list = Json::array();
  for (const auto& facet : facet_proportions(snap.index, selection, resolver)) {
    Json values = Json::array();
    for (const auto& v : facet.values) values.push_back({{"value", v.value}, {"total", v.total}, {"matched", v.matched}});
    list.push_back({{"name", facet.facet}, {"values", std::move(values)}});
  }
  Json out;
  out["total"] = snap.index.universe();
  out["matched"] = apply_selection(snap.index, selection, resolver).count();
  out["facets"] = std::move(list);
  return out;
}

Json topics(const Snapshot& snap, const FilterSelection& selection) {
  auto resolver = snap.phrase_resolver();
  Json list = Json::array();
  for (const auto& p : topic_proportions(snap.index, selection, resolver)) {
    Json j = catalog_entry_json(*snap.topic(p.topic_id));
    j["total"] = p.total;
    j["matched"] = p.matched;
    j["sentiment"] = bins_json(p.sentiment_bins);
    list.push_back(std::move(j));
  }
  Json out;
  out["total"] = snap.index.universe();
  out["matched"] = apply_selection(snap.index, selection, resolver).count();
  out["topics"] = std::move(list);
  return out;
}

Json trends(const Snapshot& snap, const FilterSelection& selection, const std::string& level) {
  if (level != "parent" && level != "leaf") throw InvalidInputError("level must be 'parent' or 'leaf'");
  auto group = snap.topic_ids_at_level(level == "parent");
  auto series = weekly_trend(snap.index, selection, group, snap.phrase_resolver());
  Json weeks = Json::array();
  for (const auto& w : series.weeks)
    weeks.push_back({{"week", to_string(w)}, {"start", format_iso8601(iso_week_start(w))}});
  Json list = Json::array();
  for (const auto& s : series.series) {
    std::vector<std::size_t> counts;
    Json sentiment = Json::array();
    for (const auto& point : s.points) {
      counts.push_back(point.conversations);
      sentiment.push_back(bins_json(point.sentiment_bins));
    }
    list.push_back({{"topic_id", s.topic_id}, {"counts", counts}, {"sentiment", std::move(sentiment)}});
  }
  Json out;
  out["level"] = level;
  out["weeks"] = std::move(weeks);
  out["series"] = std::move(list);
  return out;
}

Json conversation(const Snapshot& snap, const std::string& id) {
  auto pos = snap.index.position(id);
  if (!pos) throw NotFoundError("unknown conversation '" + id + "'");
  const auto& conv = snap.corpus().conversations[*pos];
  const auto& view = snap.views[*pos];
  Json out;
  out["id"] = conv.id;
  out["start_time"] = format_iso8601(conv.start_time);
  out["features"] = features_json(conv.features);
  Json present = Json::array();
  for (const auto& entry : snap.catalog)
    if (view.topics.count(entry.id)) present.push_back(entry.id);
  out["topics"] = std::move(present);
  Json predictions = Json::array();
  for (const auto& [topic, probability] : view.probabilities)
    predictions.push_back({{"topic_id", topic},
                           {"probability", probability},
                           {"prediction", view.topics.count(topic) ? "present" : "absent"}});
  out["predictions"] = std::move(predictions);
  out["discovered_mixture"] = view.discovered_mixture;
  out["sentiment"] = {{"bins", bins_json(view.sentiment_bins)}, {"distribution", distribution_json(view.distribution)}};
  Json messages = Json::array();
  for (std::size_t m = 0; m < conv.messages.size(); ++m) {
    const auto& msg = conv.messages[m];
    messages.push_back({{"id", msg.id},
                        {"sender", to_string(msg.sender)},
                        {"timestamp", format_iso8601(msg.timestamp)},
                        {"text", msg.text},
                        {"sentiment", view.messages[m].score},
                        {"bin", view.messages[m].bin}});
  }
  out["messages"] = std::move(messages);
  return out;
}

Json phrase_search(const Snapshot& snap, const std::map<std::string, std::string>& query) {
  const auto* phrase = query_param(query, "phrase");
  if (!phrase || phrase->empty()) throw InvalidInputError("parameter 'phrase' is required");
  double tau = kDefaultPhraseThreshold;
  if (const auto* t = query_param(query, "tau")) tau = parse_double_param("tau", *t);
  static const EmbeddingTable kNoEmbeddings;
  const auto& table = snap.inputs.embeddings ? *snap.inputs.embeddings : kNoEmbeddings;
  auto result = search(PhraseQuery::make(*phrase, tau), snap.corpus(), table);
  Json matches = Json::array();
  for (const auto& m : result.matches)
    matches.push_back({{"conversation_id", m.conversation_id},
                       {"score", m.best_score},
                       {"match_type", to_string(m.match_type)},
                       {"message_id", m.message_id},
                       {"matched_text", m.matched_text}});
  Json out;
  out["phrase"] = *phrase;
  out["tau"] = tau;
  out["out_of_vocabulary"] = result.out_of_vocabulary;
  out["query_out_of_vocabulary"] = result.query_out_of_vocabulary;
  if (result.query_out_of_vocabulary)
    out["diagnostic"] = "no phrase token has an embedding; only verbatim matches are reported";
  out["topic"] = {{"id", "user:" + *phrase}, {"label", *phrase}, {"kind", "user"}, {"count", result.matches.size()}};
  out["matches"] = std::move(matches);
  return out;
}

}  // namespace

FilterSelection selection_from_query(const std::map<std::string, std::string>& query, const CrossFilterIndex& index) {
  FilterSelection selection;
  if (const auto* text = query_param(query, "selection"); text && !text->empty())
    selection = parse_selection_json(*text);
  validate_selection(selection, index);
  return selection;
}

ExplorerService::ExplorerService(std::shared_ptr<const Snapshot> snapshot, std::shared_ptr<VerdictStore> verdicts)
    : snapshot_(std::move(snapshot)), verdicts_(std::move(verdicts)) {
  if (!snapshot_) throw InvalidInputError("explorer service needs a snapshot");
  if (!verdicts_) verdicts_ = std::make_shared<VerdictStore>();
}

std::shared_ptr<const Snapshot> ExplorerService::snapshot() const {
  std::lock_guard lock(snapshot_mutex_);
  return snapshot_;
}

void ExplorerService::swap_snapshot(std::shared_ptr<const Snapshot> next) {
  if (!next) throw InvalidInputError("cannot swap in an empty snapshot");
  std::lock_guard lock(snapshot_mutex_);
  snapshot_ = std::move(next);
}

ApiResponse ExplorerService::handle(const ApiRequest& request) {
  try {
    return dispatch(request);
  } catch (const SelectionError& e) {
    Json diagnostics = Json::array();
    for (const auto& d : e.diagnostics()) diagnostics.push_back({{"field", d.field}, {"message", d.message}});
    return error_response(400, "invalid_selection", e.what(), {{"diagnostics", std::move(diagnostics)}});
  } catch (const NotFoundError& e) {
    return error_response(404, "not_found", e.what());
  } catch (const ValidationError& e) {
    return error_response(422, "validation_failed", e.what());
  } catch (const StorageError& e) {
    return error_response(503, "storage_unavailable", e.what(), {{"retryable", true}});
  } catch (const InvalidInputError& e) {
    return error_response(400, "invalid_request", e.what());
  } catch (const OutOfVocabularyError& e) {
    return error_response(400, "invalid_request", e.what());
  } catch (const FormatError& e) {
    return error_response(400, "invalid_request", e.what());
  } catch (const std::exception& e) {
    return error_response(500, "internal_error", e.what());
  }
}

ApiResponse ExplorerService::dispatch(const ApiRequest& request) {
  const std::string& path = request.path;
  const bool get = request.method == "GET";
  const bool post = request.method == "POST";

  if (path == "/labels") {
    if (!post) return error_response(405, "method_not_allowed", "use POST");
    auto snap = snapshot();
    return post_label(*snap, request.body);
  }
  if (path == "/lda/refit") {
    if (!post) return error_response(405, "method_not_allowed", "use POST");
    return refit_lda(request);
  }

  static const std::set<std::string> kReadPaths = {"/health", "/overview", "/facets", "/topics",
                                                   "/trends", "/search",   "/export/labels.csv"};
  const bool conversation_path = path.rfind("/conversation/", 0) == 0;
  if (!kReadPaths.count(path) && !conversation_path) return error_response(404, "not_found", "no route for " + path);
  if (!get) return error_response(405, "method_not_allowed", "use GET");

  auto snap = snapshot();
  if (path == "/health")
    return json_response({{"status", "ok"}, {"conversations", snap->index.universe()}});
  if (path == "/export/labels.csv") {
    auto verdicts = verdicts_->latest();
    return {200, "text/csv; charset=utf-8", export_labels_csv(verdicts)};
  }
  if (conversation_path) return json_response(conversation(*snap, path.substr(std::string("/conversation/").size())));
  if (path == "/search") return json_response(phrase_search(*snap, request.query));

  FilterSelection selection = selection_from_query(request.query, snap->index);
  if (path == "/overview") {
    bool include_context = false;
    if (const auto* p = query_param(request.query, "include_context"))
      include_context = parse_bool_param("include_context", *p);
    return json_response(overview(*snap, selection, include_context));
  }
  if (path == "/facets") return json_response(facets(*snap, selection));
  if (path == "/topics") return json_response(topics(*snap, selection));
  const auto* level = query_param(request.query, "level");
  return json_response(trends(*snap, selection, level ? *level : "parent"));
}

ApiResponse ExplorerService::post_label(const Snapshot& snap, const std::string& body) {
  Json j = Json::parse(body, nullptr, false);
  if (j.is_discarded() || !j.is_object()) throw InvalidInputError("label body must be a JSON object");
  auto field = [&](const char* name, bool required) -> std::optional<std::string> {
    auto it = j.find(name);
    if (it == j.end() || it->is_null()) {
      if (required) throw InvalidInputError(std::string("field '") + name + "' is required");
      return std::nullopt;
    }
    if (!it->is_string()) throw InvalidInputError(std::string("field '") + name + "' must be a string");
    return it->get<std::string>();
  };

  TopicVerdict verdict;
  verdict.conversation_id = *field("conversation_id", true);
  verdict.topic_id = *field("topic_id", true);
  verdict.verdict = parse_verdict_kind(*field("verdict", true));
  verdict.annotator_id = *field("annotator_id", true);
  if (verdict.annotator_id.empty()) throw InvalidInputError("field 'annotator_id' must not be empty");

  auto pos = snap.index.position(verdict.conversation_id);
  if (!pos) throw ValidationError("unknown conversation '" + verdict.conversation_id + "'");
  if (!snap.inputs.hierarchy.is_leaf(verdict.topic_id))
    throw ValidationError("unknown topic '" + verdict.topic_id + "' (verdicts apply to pre-defined leaf topics)");

  const bool predicted = snap.views[*pos].topics.count(verdict.topic_id) > 0;
  verdict.model_prediction = predicted;
  if (auto claimed = field("model_prediction", false)) {
    if (*claimed != "present" && *claimed != "absent")
      throw InvalidInputError("field 'model_prediction' must be 'present' or 'absent'");
    if ((*claimed == "present") != predicted)
      throw ValidationError("model_prediction '" + *claimed + "' does not match the current prediction");
  }
  if (auto at = field("recorded_at", false))
    verdict.recorded_at = parse_iso8601(*at);
  else
    verdict.recorded_at = std::chrono::floor<std::chrono::seconds>(std::chrono::system_clock::now());

  bool superseded = verdicts_->record(verdict);
  Json out;
  out["status"] = "recorded";
  out["superseded"] = superseded;
  out["verdict"] = Json::parse(verdict_log_line(verdict));
  out["derived_label"] = verdict.derived_label() ? "present" : "absent";
  return json_response(out);
}

ApiResponse ExplorerService::refit_lda(const ApiRequest& request) {
  std::lock_guard refit_lock(refit_mutex_);
  auto current = snapshot();
  LdaConfig config = current->inputs.lda_model ? current->inputs.lda_model->config
                                               : current->inputs.lda_config.value_or(LdaConfig{});
  config.trace_every = 0;
  const auto& q = request.query;
  if (const auto* k = query_param(q, "k")) {
    config.k = parse_uint_param("k", *k);
    if (!query_param(q, "alpha")) config.alpha.reset();
  }
  if (const auto* a = query_param(q, "alpha")) config.alpha = parse_double_param("alpha", *a);
  if (const auto* s = query_param(q, "seed")) config.seed = parse_uint_param("seed", *s);
  if (const auto* it = query_param(q, "iterations")) config.iterations = parse_uint_param("iterations", *it);
  config.validate();

  SnapshotInputs inputs = current->inputs;
  inputs.lda_model.reset();
  inputs.lda_config = config;
  auto next = build_snapshot(std::move(inputs));
  swap_snapshot(next);

  Json topics = Json::array();
  for (const auto& d : next->discovered)
    topics.push_back({{"id", discovered_topic_id(d.topic_index)}, {"label", d.label}, {"weight", d.weight}});
  Json out;
  out["status"] = "refit";
  out["k"] = config.k;
  out["seed"] = config.seed;
  out["iterations"] = config.iterations;
  out["topics"] = std::move(topics);
  return json_response(out);
}

}  // namespace convoscope
