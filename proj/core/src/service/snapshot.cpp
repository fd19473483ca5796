#include "convoscope/service/snapshot.hpp"

#include <algorithm>
#include <unordered_map>

#include "convoscope/common/errors.hpp"
#include "convoscope/common/text.hpp"
#include "convoscope/phrase/search.hpp"
#include "convoscope/topics/vectorizer.hpp"

namespace convoscope {

std::string_view to_string(TopicKind kind) { return kind == TopicKind::kPredefined ? "predefined" : "discovered"; }

std::string discovered_topic_id(std::size_t topic_index) {
  return std::string(kDiscoveredParentId) + "." + std::to_string(topic_index);
}

const TopicCatalogEntry* Snapshot::topic(std::string_view id) const {
  for (const auto& entry : catalog)
    if (entry.id == id) return &entry;
  return nullptr;
}

std::vector<std::string> Snapshot::topic_ids_at_level(bool parents) const {
  std::vector<std::string> out;
  for (const auto& entry : catalog)
    if (entry.parent_id.has_value() != parents) out.push_back(entry.id);
  return out;
}

PhraseResolver Snapshot::phrase_resolver() const {
  return [this](const PhraseConstraint& constraint) {
    static const EmbeddingTable kNoEmbeddings;
    const EmbeddingTable& table = inputs.embeddings ? *inputs.embeddings : kNoEmbeddings;
    auto result = search(PhraseQuery::make(constraint.text, constraint.tau), inputs.corpus, table);
    Bitset bits(index.universe());
    for (const auto& match : result.matches)
      if (auto pos = index.position(match.conversation_id)) bits.set(*pos);
    return bits;
  };
}

namespace {

std::vector<TopicCatalogEntry> predefined_catalog(const TopicHierarchy& hierarchy) {
  std::vector<TopicCatalogEntry> out;
  for (const auto& parent : hierarchy.parents()) {
    out.push_back({parent, hierarchy.find(parent)->label, std::nullopt, TopicKind::kPredefined});
    for (const auto& leaf : hierarchy.children(parent))
      out.push_back({leaf, hierarchy.find(leaf)->label, parent, TopicKind::kPredefined});
  }
  return out;
}

std::string join_words(const std::vector<std::string>& words) {
  std::string out;
  for (const auto& w : words) {
    if (!out.empty()) out += ' ';
    out += w;
  }
  return out;
}

}  // namespace

std::shared_ptr<const Snapshot> build_snapshot(SnapshotInputs inputs) {
  auto snap = std::make_shared<Snapshot>();
  snap->inputs = std::move(inputs);
  const auto& in = snap->inputs;
  const auto& conversations = in.corpus.conversations;

  if (in.hierarchy.find(kDiscoveredParentId))
    throw InvalidInputError("topic id '" + std::string(kDiscoveredParentId) + "' is reserved");
  if (in.model) {
    for (const auto& weights : in.model->classifier.topics)
      if (!in.hierarchy.is_leaf(weights.topic_id))
        throw InvalidInputError("model topic '" + weights.topic_id + "' is not a leaf of the topic hierarchy");
    if (in.model->classifier.dimension != in.model->vectorizer.dimension())
      throw FeatureMismatchError("model vocabulary and classifier dimension differ");
  }

  snap->catalog = predefined_catalog(in.hierarchy);
  snap->views.resize(conversations.size());

  for (std::size_t i = 0; i < conversations.size(); ++i) {
    const auto& conv = conversations[i];
    auto& view = snap->views[i];
    for (const auto& message : conv.messages) {
      auto score = score_text(message.text, in.lexicon);
      int bin = bin_score(score);
      view.messages.push_back({score.value, bin});
      ++view.sentiment_bins[bin_slot(bin)];
    }
    if (!conv.messages.empty()) view.distribution = distribution_from_counts(view.sentiment_bins);
    if (in.model) {
      auto prediction = predict(in.model->classifier, in.model->vectorizer.transform(conversation_text(conv)),
                                in.hierarchy);
      view.probabilities = std::move(prediction.probabilities);
      view.topics = std::move(prediction.present);
    }
  }

  if (!in.lda_model && in.lda_config) {
    std::vector<LdaDocument> docs;
    docs.reserve(conversations.size());
    for (const auto& conv : conversations)
      docs.push_back({conv.id, tokenize(conversation_text(conv), bag_of_words_tokenizer())});
    snap->inputs.lda_model = fit_lda(docs, *in.lda_config);
  }
  if (const auto& lda = snap->inputs.lda_model) {
    const std::size_t k = lda->k();
    snap->catalog.push_back({std::string(kDiscoveredParentId), "Discovered", std::nullopt, TopicKind::kDiscovered});
    for (std::size_t t = 0; t < k; ++t) {
      auto topic = topic_label(*lda, t);
      snap->catalog.push_back(
          {discovered_topic_id(t), join_words(topic.label), std::string(kDiscoveredParentId), TopicKind::kDiscovered});
      snap->discovered.push_back(std::move(topic));
    }
    const double cutoff = 1.0 / static_cast<double>(k) + in.discovered_margin;
    for (std::size_t i = 0; i < conversations.size(); ++i) {
      const auto& conv = conversations[i];
      auto& view = snap->views[i];
      if (auto row = lda->document_index(conv.id)) {
        auto theta = lda->theta.row(*row);
        view.discovered_mixture.assign(theta.begin(), theta.end());
      } else {
        auto tokens = tokenize(conversation_text(conv), bag_of_words_tokenizer());
        view.discovered_mixture = infer_doc_topics(*lda, tokens, 100, lda->config.seed).mixture;
      }
      for (std::size_t t = 0; t < k; ++t) {
        if (view.discovered_mixture[t] >= cutoff) {
          view.topics.insert(discovered_topic_id(t));
          view.topics.insert(std::string(kDiscoveredParentId));
        }
      }
    }
  }

  std::unordered_map<std::string, ConversationAnnotation> annotations;
  annotations.reserve(conversations.size());
  for (std::size_t i = 0; i < conversations.size(); ++i) {
    const auto& view = snap->views[i];
    annotations.emplace(conversations[i].id,
                        ConversationAnnotation{{view.topics.begin(), view.topics.end()}, view.sentiment_bins});
  }
  std::vector<std::string> topic_ids;
  for (const auto& entry : snap->catalog) topic_ids.push_back(entry.id);
  snap->index = CrossFilterIndex::build(in.corpus, annotations, topic_ids);
  return snap;
}

}  // namespace convoscope
