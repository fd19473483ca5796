#pragma once

#include <map>
#include <memory>
#include <mutex>
#include <string>

#include "convoscope/analytics/selection.hpp"
#include "convoscope/service/snapshot.hpp"
#include "convoscope/service/verdicts.hpp"

namespace convoscope {

struct ApiRequest {
  std::string method = "GET";
  std::string path;
  std::map<std::string, std::string> query;  // already URL-decoded
  std::string body;
};

struct ApiResponse {
  int status = 200;
  std::string content_type = "application/json";
  std::string body;
};

// Transport-independent request handling for the explorer API:
//   GET  /overview?selection=&include_context=
//   GET  /facets?selection=
//   GET  /topics?selection=
//   GET  /trends?selection=&level=parent|leaf
//   GET  /conversation/{id}
//   GET  /search?phrase=&tau=
//   POST /labels
//   GET  /export/labels.csv
//   POST /lda/refit?k=&seed=&iterations=
//   GET  /health
// Reads are pure functions of (snapshot, request). Snapshot swaps are atomic
// for readers.
class ExplorerService {
 public:
  ExplorerService(std::shared_ptr<const Snapshot> snapshot, std::shared_ptr<VerdictStore> verdicts);

  // Never throws: errors become 4xx/5xx responses with a JSON body.
  ApiResponse handle(const ApiRequest& request);

  std::shared_ptr<const Snapshot> snapshot() const;
  void swap_snapshot(std::shared_ptr<const Snapshot> next);
  VerdictStore& verdicts() { return *verdicts_; }

 private:
  ApiResponse dispatch(const ApiRequest& request);
  ApiResponse post_label(const Snapshot& snapshot, const std::string& body);
  ApiResponse refit_lda(const ApiRequest& request);

  mutable std::mutex snapshot_mutex_;
  std::mutex refit_mutex_;
  std::shared_ptr<const Snapshot> snapshot_;
  std::shared_ptr<VerdictStore> verdicts_;
};

// Parses the `selection` query parameter (absent = empty selection) and
// validates it against the index. Shared by every read endpoint.
FilterSelection selection_from_query(const std::map<std::string, std::string>& query, const CrossFilterIndex& index);

}  // namespace convoscope
