#include "mel/subset.hpp"

#include <charconv>

#include "mel/error.hpp"
#include "mel/parallel.hpp"

namespace mel {

std::string to_string(SubsetMask mask) {
  std::string out = "{";
  bool first = true;
  for (auto e : mask.elements()) {
    if (!first) out += ',';
    out += std::to_string(e + 1);
    first = false;
  }
  return out + "}";
}

SubsetMask parse_subset(std::string_view text, std::size_t n) {
  if (!text.empty() && text.front() == '{') {
    if (text.back() != '}') throw DomainError("unterminated subset: " + std::string(text));
    text = text.substr(1, text.size() - 2);
  }
  SubsetMask mask;
  while (!text.empty()) {
    const auto comma = text.find(',');
    std::string_view item = text.substr(0, comma);
    while (!item.empty() && item.front() == ' ') item.remove_prefix(1);
    while (!item.empty() && item.back() == ' ') item.remove_suffix(1);
    std::size_t value = 0;
    auto [ptr, ec] = std::from_chars(item.data(), item.data() + item.size(), value);
    if (ec != std::errc{} || ptr != item.data() + item.size() || value < 1 || value > n)
      throw DomainError("bad subset element '" + std::string(item) + "' (ground set is 1.." + std::to_string(n) +
                        ")");
    if (mask.contains(value - 1)) throw DomainError("repeated subset element " + std::string(item));
    mask = mask.with(value - 1);
    if (comma == std::string_view::npos) break;
    text.remove_prefix(comma + 1);
  }
  return mask;
}

unsigned default_workers() { return std::max(1u, std::thread::hardware_concurrency()); }

}  // namespace mel
