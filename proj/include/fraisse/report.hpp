#pragma once

// Deterministic `key: value` reports. Keys are unique and the rendered text
// is sorted by key, so identical runs produce byte-identical output.

#include <string>
#include <vector>

#include "fraisse/structure.hpp"

namespace fraisse {

class Report {
 public:
  void add(const std::string& key, const std::string& value);
  void add(const std::string& key, const char* value) { add(key, std::string(value)); }
  void add(const std::string& key, long value) { add(key, std::to_string(value)); }
  void add(const std::string& key, int value) { add(key, std::to_string(value)); }
  void add(const std::string& key, bool value) { add(key, value ? "true" : "false"); }

  std::string render() const;  // sorted, one "key: value" line each

 private:
  std::vector<std::pair<std::string, std::string>> entries_;
};

// Zero-padded index for sortable report keys: pad_index(7) == "0007".
std::string pad_index(long i, int width = 4);

// Space-separated image list of a map table.
std::string map_text(const SurjectiveMap& f);

// Exact dyadic rational num / 2^log2_den in lowest terms, e.g. "1/16", "3".
std::string dyadic_text(long long num, int log2_den);

}  // namespace fraisse
