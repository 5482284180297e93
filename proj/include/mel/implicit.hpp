#pragma once

// Exact implicitization by linear algebra.
//
// A polynomial relation g among (f_i)_{i in A} of degree <= D is a kernel vector of the
// evaluation matrix [m(f_A(x))] with one column per monomial m of degree <= D and one row
// per grid point x in S^s. The composition g(f_A) has total degree <= D*d, so taking
// |S| > D*d makes "vanishes on the grid" equivalent to "vanishes identically".

#include <cstdint>
#include <optional>
#include <vector>

#include "mel/instance.hpp"
#include "mel/mpoly.hpp"
#include "mel/subset.hpp"

namespace mel::implicit {

struct ImplicitOptions {
  std::uint64_t grid_guard = kDefaultGridGuard;
  std::uint64_t monomial_guard = mpoly::kDefaultMonomialGuard;
  unsigned workers = 1;
};

/// Grid S^s with S = the first `side` elements of F_{q0^ext_k}.
struct GridSpec {
  std::uint32_t ext_k = 1;
  std::uint64_t side = 1;
  std::uint64_t points = 1;
};

/// Smallest grid on which a polynomial of total degree <= composed_degree in s
/// variables vanishes only if it is zero.
GridSpec exact_grid(const Instance& instance, std::uint64_t composed_degree, std::uint64_t guard);

struct AnnihilatorBasis {
  SubsetMask varsubset;
  std::uint32_t degree_bound = 0;
  /// Over the base field, in the instance's n variables (only X_i, i in varsubset, occur),
  /// in reduced row-echelon form with leading monomials descending.
  std::vector<mpoly::MPoly> basis;
  GridSpec grid;

  bool empty() const { return basis.empty(); }
};

/// True iff g(f_1, ..., f_n) is identically zero. g lives over the base field in n variables.
bool ideal_member(const Instance& instance, const mpoly::MPoly& g, const ImplicitOptions& options = {});

/// All relations of degree <= D among (f_i)_{i in A}; each basis element is re-verified.
AnnihilatorBasis annihilator_space(const Instance& instance, SubsetMask A, std::uint32_t D,
                                   const ImplicitOptions& options = {});

/// Smallest D in [1, max_degree] with a nonzero annihilator space, or nullopt.
std::optional<AnnihilatorBasis> lowest_annihilators(const Instance& instance, SubsetMask A,
                                                    std::uint32_t max_degree,
                                                    const ImplicitOptions& options = {});

/// Minimal-degree relation of a circuit: monic, degree <= delta, involving every X_j, j in C.
mpoly::MPoly circuit_annihilator(const Instance& instance, SubsetMask C, std::uint32_t delta,
                                 const ImplicitOptions& options = {});

/// Degree of the hypersurface V when rank(E) = n - 1: the least D with a relation among
/// all coordinates. Searches D = 1 .. d^m.
std::uint32_t hypersurface_degree(const Instance& instance, std::uint32_t m, const ImplicitOptions& options = {});

/// Basis polynomials involving only the variables in `allowed`: the intersection of the
/// span with the polynomial ring on those variables, in canonical echelon form.
std::vector<mpoly::MPoly> restrict_to(const std::vector<mpoly::MPoly>& basis, SubsetMask allowed);

}  // namespace mel::implicit
