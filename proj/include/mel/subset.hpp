#pragma once

#include <bit>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace mel {

inline constexpr std::size_t kMaxGroundSet = 24;

/// Subset of the ground set {0, ..., n-1}; rendered 1-based as `{1,3,4}`.
class SubsetMask {
 public:
  constexpr SubsetMask() = default;
  constexpr explicit SubsetMask(std::uint32_t bits) : bits_(bits) {}

  static constexpr SubsetMask full(std::size_t n) {
    return SubsetMask(n >= 32 ? ~0u : ((1u << n) - 1u));
  }
  static constexpr SubsetMask singleton(std::size_t i) { return SubsetMask(1u << i); }
  static SubsetMask of(std::initializer_list<std::size_t> elements) {
    SubsetMask m;
    for (auto e : elements) m = m.with(e);
    return m;
  }

  constexpr std::uint32_t bits() const { return bits_; }
  constexpr std::size_t size() const { return static_cast<std::size_t>(std::popcount(bits_)); }
  constexpr bool empty() const { return bits_ == 0; }
  constexpr bool contains(std::size_t i) const { return (bits_ >> i) & 1u; }
  constexpr bool contains(SubsetMask other) const { return (other.bits_ & ~bits_) == 0; }
  constexpr SubsetMask with(std::size_t i) const { return SubsetMask(bits_ | (1u << i)); }
  constexpr SubsetMask without(std::size_t i) const { return SubsetMask(bits_ & ~(1u << i)); }

  constexpr SubsetMask operator|(SubsetMask o) const { return SubsetMask(bits_ | o.bits_); }
  constexpr SubsetMask operator&(SubsetMask o) const { return SubsetMask(bits_ & o.bits_); }
  constexpr SubsetMask minus(SubsetMask o) const { return SubsetMask(bits_ & ~o.bits_); }

  /// Elements in increasing order.
  std::vector<std::size_t> elements() const {
    std::vector<std::size_t> out;
    for (std::uint32_t b = bits_; b != 0; b &= b - 1) out.push_back(std::countr_zero(b));
    return out;
  }

  friend constexpr bool operator==(SubsetMask, SubsetMask) = default;
  friend constexpr auto operator<=>(SubsetMask a, SubsetMask b) { return a.bits_ <=> b.bits_; }

 private:
  std::uint32_t bits_ = 0;
};

std::string to_string(SubsetMask mask);

/// Parses `1,3,4` or `{1,3,4}` (1-based) into a mask; throws DomainError on bad input.
SubsetMask parse_subset(std::string_view text, std::size_t n);

}  // namespace mel
