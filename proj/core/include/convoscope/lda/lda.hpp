#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

namespace convoscope {

struct LdaConfig {
  std::size_t k = 3;
  std::optional<double> alpha;  // symmetric document-topic prior, 50/k when unset
  double beta = 0.01;           // symmetric topic-word prior
  std::size_t iterations = 1000;
  std::uint64_t seed = 1;
  // Record the joint log-likelihood every N sweeps (0 disables tracing).
  std::size_t trace_every = 0;

  double alpha_value() const { return alpha ? *alpha : 50.0 / static_cast<double>(k); }
  // Throws InvalidInputError when k == 0 or a prior is not positive.
  void validate() const;
};

struct LdaDocument {
  std::string id;
  std::vector<std::string> tokens;
};

// Row-major dense matrix.
struct Matrix {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<double> data;

  Matrix() = default;
  Matrix(std::size_t r, std::size_t c) : rows(r), cols(c), data(r * c, 0.0) {}

  std::span<double> row(std::size_t r) { return {data.data() + r * cols, cols}; }
  std::span<const double> row(std::size_t r) const { return {data.data() + r * cols, cols}; }
  double& operator()(std::size_t r, std::size_t c) { return data[r * cols + c]; }
  double operator()(std::size_t r, std::size_t c) const { return data[r * cols + c]; }

  bool operator==(const Matrix&) const = default;
};

struct LdaModel {
  LdaConfig config;
  std::vector<std::string> vocabulary;  // sorted; column order of phi
  std::vector<std::string> document_ids;  // input order; row order of theta
  Matrix phi;    // k x V topic-word probabilities
  Matrix theta;  // D x k document-topic probabilities
  // Topic of every token, per document in input order. Empty for models read
  // back from a dump.
  std::vector<std::vector<std::uint16_t>> token_assignments;
  // (sweep, joint log-likelihood) pairs when tracing is enabled.
  std::vector<std::pair<std::size_t, double>> log_likelihood_trace;

  std::size_t k() const { return phi.rows; }
  std::optional<std::size_t> word_index(std::string_view word) const;
  std::optional<std::size_t> document_index(std::string_view id) const;
};

// Collapsed Gibbs sampling. Documents are processed in canonical order
// (sorted by id) so the result is independent of input order for a fixed
// seed. Throws TrainingDataError for an empty vocabulary and
// InvalidInputError for fewer than k documents.
LdaModel fit_lda(std::span<const LdaDocument> documents, const LdaConfig& config);

struct DiscoveredTopic {
  std::size_t topic_index = 0;
  std::vector<std::string> label;  // up to five highest-probability words
  double weight = 0.0;             // mean document share
};

inline constexpr std::size_t kTopicLabelWords = 5;

// Ties in probability are broken lexicographically. Throws InvalidInputError
// for an out-of-range index.
DiscoveredTopic topic_label(const LdaModel& model, std::size_t topic_index);

struct TopicMixture {
  std::vector<double> mixture;  // length k, sums to 1
  bool out_of_vocabulary = false;
  std::size_t known_tokens = 0;
};

// Gibbs sampling of a new document's assignments with phi held fixed; the
// mixture averages the smoothed topic shares over the second half of the
// sweeps. A document without known tokens gets the uniform mixture.
TopicMixture infer_doc_topics(const LdaModel& model, std::span<const std::string> tokens, std::size_t sweeps = 100,
                              std::uint64_t seed = 1);

// Text dump:
//   # convoscope-lda v1
//   k <k> / V <V> / D <D> / seed <seed> / alpha <a> / beta <b> / iterations <n>   (one per line)
//   vocabulary, then V words, one per line
//   phi, then k lines of V space-separated reals
//   theta, then D lines `doc_id<TAB>k space-separated reals`
//   end
void write_lda_model(std::ostream& out, const LdaModel& model);
LdaModel read_lda_model(std::istream& in);
void save_lda_model(const LdaModel& model, const std::filesystem::path& path);
LdaModel load_lda_model(const std::filesystem::path& path);

}  // namespace convoscope
