#pragma once

// Exact enumeration of Im Phi(F) and V(F) over F = F_{q0^ext_k}.

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "mel/gf.hpp"
#include "mel/implicit.hpp"
#include "mel/instance.hpp"

namespace mel::pointset {

enum class Provenance { image, variety };

std::string to_string(Provenance p);

/// Deduplicated n-tuples over `field`, sorted lexicographically by element code.
struct PointSet {
  gf::FieldRef field;
  std::size_t n = 0;
  std::vector<gf::Code> coords;  // row-major, size() * n entries
  Provenance provenance = Provenance::image;

  std::size_t size() const { return n == 0 ? 0 : coords.size() / n; }
  std::span<const gf::Code> point(std::size_t i) const { return {coords.data() + i * n, n}; }

  friend bool operator==(const PointSet& a, const PointSet& b) {
    return gf::same_field(*a.field, *b.field) && a.n == b.n && a.coords == b.coords;
  }
};

struct PointOptions {
  std::uint64_t grid_guard = kDefaultGridGuard;
  unsigned workers = 1;
};

gf::FieldRef extension_field(const Instance& instance, std::uint32_t ext_k);

PointSet image_points(const Instance& instance, std::uint32_t ext_k, const PointOptions& options = {});

/// Common zeros in F^n of an annihilator basis over the full ground set. The result is
/// checked to contain image_points(instance, ext_k); a violation throws SoundnessError.
PointSet variety_points(const Instance& instance, std::uint32_t ext_k, const implicit::AnnihilatorBasis& basis,
                        const PointOptions& options = {});

std::uint64_t count(const PointSet& ps);

/// True when every point of `sub` is a point of `super` (same field and n).
bool contains_all(const PointSet& super, const PointSet& sub);

/// Image of the points under the subfield embedding into `sup`, re-sorted.
PointSet embed_points(const PointSet& ps, const gf::FieldRef& sup);

/// Coordinates rendered with Field::render, joined by `,`.
std::string render_point(const PointSet& ps, std::size_t i);

}  // namespace mel::pointset
