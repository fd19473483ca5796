#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "convoscope/common/errors.hpp"
#include "convoscope/lda/lda.hpp"

namespace convoscope {
namespace {

constexpr const char* kHeader = "# convoscope-lda v1";

std::string real(double value) {
  char buffer[40];
  std::snprintf(buffer, sizeof buffer, "%.17g", value);
  return buffer;
}

void write_row(std::ostream& out, std::span<const double> row) {
  for (std::size_t i = 0; i < row.size(); ++i) out << (i ? " " : "") << real(row[i]);
  out << '\n';
}

class Reader {
 public:
  explicit Reader(std::istream& in) : in_(in) {}

  std::string next() {
    std::string line;
    if (!std::getline(in_, line)) throw FormatError("unexpected end of LDA dump", line_ + 1);
    ++line_;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    return line;
  }

  std::string keyed(const std::string& key) {
    std::string line = next();
    if (line.rfind(key + " ", 0) != 0) throw FormatError("expected '" + key + "'", line_);
    return line.substr(key.size() + 1);
  }

  void expect(const std::string& literal) {
    if (next() != literal) throw FormatError("expected '" + literal + "'", line_);
  }

  std::vector<double> reals(const std::string& text, std::size_t expected) {
    std::vector<double> out;
    std::istringstream ss(text);
    std::string field;
    while (ss >> field) {
      char* end = nullptr;
      double v = std::strtod(field.c_str(), &end);
      if (*end != '\0') throw FormatError("invalid real '" + field + "'", line_);
      out.push_back(v);
    }
    if (out.size() != expected)
      throw FormatError("expected " + std::to_string(expected) + " values, got " + std::to_string(out.size()), line_);
    return out;
  }

  std::size_t count(const std::string& key) {
    std::string text = keyed(key);
    char* end = nullptr;
    auto v = std::strtoull(text.c_str(), &end, 10);
    if (text.empty() || *end != '\0') throw FormatError("invalid count for '" + key + "'", line_);
    return static_cast<std::size_t>(v);
  }

  double real_value(const std::string& key) { return reals(keyed(key), 1).front(); }

 private:
  std::istream& in_;
  std::size_t line_ = 0;
};

}  // namespace

void write_lda_model(std::ostream& out, const LdaModel& model) {
  out << kHeader << '\n';
  out << "k " << model.k() << '\n';
  out << "V " << model.vocabulary.size() << '\n';
  out << "D " << model.document_ids.size() << '\n';
  out << "seed " << model.config.seed << '\n';
  out << "alpha " << real(model.config.alpha_value()) << '\n';
  out << "beta " << real(model.config.beta) << '\n';
  out << "iterations " << model.config.iterations << '\n';
  out << "vocabulary\n";
  for (const auto& word : model.vocabulary) out << word << '\n';
  out << "phi\n";
  for (std::size_t t = 0; t < model.phi.rows; ++t) write_row(out, model.phi.row(t));
  out << "theta\n";
  for (std::size_t d = 0; d < model.theta.rows; ++d) {
    out << model.document_ids[d] << '\t';
    write_row(out, model.theta.row(d));
  }
  out << "end\n";
}

LdaModel read_lda_model(std::istream& in) {
  Reader reader(in);
  reader.expect(kHeader);
  LdaModel model;
  std::size_t k = reader.count("k");
  std::size_t v = reader.count("V");
  std::size_t d = reader.count("D");
  model.config.k = k;
  model.config.seed = reader.count("seed");
  model.config.alpha = reader.real_value("alpha");
  model.config.beta = reader.real_value("beta");
  model.config.iterations = reader.count("iterations");
  model.config.validate();

  reader.expect("vocabulary");
  for (std::size_t i = 0; i < v; ++i) model.vocabulary.push_back(reader.next());
  for (std::size_t i = 1; i < model.vocabulary.size(); ++i)
    if (!(model.vocabulary[i - 1] < model.vocabulary[i])) throw FormatError("vocabulary not sorted", 0);

  reader.expect("phi");
  model.phi = Matrix(k, v);
  for (std::size_t t = 0; t < k; ++t) {
    auto row = reader.reals(reader.next(), v);
    std::copy(row.begin(), row.end(), model.phi.row(t).begin());
  }
  reader.expect("theta");
  model.theta = Matrix(d, k);
  for (std::size_t i = 0; i < d; ++i) {
    std::string line = reader.next();
    auto tab = line.find('\t');
    if (tab == std::string::npos) throw FormatError("theta row without document id", 0);
    model.document_ids.push_back(line.substr(0, tab));
    auto row = reader.reals(line.substr(tab + 1), k);
    std::copy(row.begin(), row.end(), model.theta.row(i).begin());
  }
  reader.expect("end");
  return model;
}

void save_lda_model(const LdaModel& model, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IngestionError("cannot write LDA dump " + path.string());
  write_lda_model(out, model);
  if (!out.flush()) throw IngestionError("failed writing LDA dump " + path.string());
}

LdaModel load_lda_model(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IngestionError("cannot read LDA dump " + path.string());
  return read_lda_model(in);
}

}  // namespace convoscope
