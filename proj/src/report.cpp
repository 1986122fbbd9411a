#include "fraisse/report.hpp"

#include <algorithm>
#include <sstream>

namespace fraisse {

void Report::add(const std::string& key, const std::string& value) {
  for (const auto& [k, v] : entries_)
    if (k == key) throw Error("duplicate report key: " + key);
  entries_.push_back({key, value});
}

std::string Report::render() const {
  auto sorted = entries_;
  std::sort(sorted.begin(), sorted.end());
  std::string out;
  for (const auto& [k, v] : sorted) {
    out += k;
    out += ": ";
    out += v;
    out += "\n";
  }
  return out;
}

std::string pad_index(long i, int width) {
  std::string digits = std::to_string(i);
  if (static_cast<int>(digits.size()) < width)
    digits.insert(0, width - digits.size(), '0');
  return digits;
}

std::string map_text(const SurjectiveMap& f) {
  std::string out;
  for (std::size_t i = 0; i < f.table.size(); ++i) {
    if (i) out += " ";
    out += std::to_string(f.table[i]);
  }
  return out;
}

std::string dyadic_text(long long num, int log2_den) {
  while (log2_den > 0 && num % 2 == 0) {
    num /= 2;
    --log2_den;
  }
  if (log2_den == 0) return std::to_string(num);
  return std::to_string(num) + "/" + std::to_string(1LL << log2_den);
}

}  // namespace fraisse
