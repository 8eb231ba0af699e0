#pragma once

#include <optional>
#include <string_view>

#include "roofkit/roofs.hpp"
#include "roofkit/simplexfn.hpp"
#include "roofkit/states.hpp"

namespace roofkit {

enum class Flavor { Coherence, Entanglement };
enum class Extension { PureOnly, ConvexRoof, Assistance };

std::string_view to_string(Flavor flavor);
std::string_view to_string(Extension extension);

/// f(mu(psi)).
double c_pure(const PureState& psi, const SimplexFunction& f);
/// f(lambda(psi)); lambda is zero-padded to max(dimA, dimB).
double e_pure(const PureState& psi, Dims dims, const SimplexFunction& f);
double e_pure(const BipartiteState& psi, const SimplexFunction& f);

Objective coherence_objective(const SimplexFunction& f);
Objective entanglement_objective(const SimplexFunction& f, Dims dims);

/// f(diag rho): upper bound on the coherence of assistance (Jensen).
double coherence_assistance_bound(const DensityMatrix& rho, const SimplexFunction& f);

/// min over both marginals of f(spectrum of the marginal): upper bound on the
/// entanglement of assistance. For the concurrence function this is
/// sqrt(2 (1 - tr rho_A^2)) or the rho_B analogue, whichever is smaller.
double entanglement_assistance_bound(const BipartiteState& rho, const SimplexFunction& f);

/// Convex roof (minimum) or assistance (maximum) of C_f. PureOnly requires a
/// rank-1 state. Brackets: Assistance -> f(diag rho), ConvexRoof -> 0.
RoofResult coherence(const DensityMatrix& rho, const SimplexFunction& f, Extension extension,
                     const Budget& budget = {});

/// Convex roof or assistance of E_f. Assistance carries the marginal bound.
RoofResult entanglement(const BipartiteState& rho, const SimplexFunction& f, Extension extension,
                        const Budget& budget = {});

/// One member of the sextet indexed by f.
class MeasureSpec {
 public:
  /// Built-ins are accepted as-is; anything else must pass check_membership in
  /// `dim` dimensions. Throws NotMember.
  MeasureSpec(SimplexFunction f, Flavor flavor, Extension extension, std::size_t dim = 4);

  const SimplexFunction& function() const noexcept { return f_; }
  Flavor flavor() const noexcept { return flavor_; }
  Extension extension() const noexcept { return extension_; }

  /// Dispatches to coherence or entanglement; a coherence spec on a bipartite
  /// state uses the flat product basis as reference basis.
  RoofResult evaluate(const BipartiteState& state, const Budget& budget = {}) const;
  RoofResult evaluate(const DensityMatrix& state, const Budget& budget = {}) const;

 private:
  SimplexFunction f_;
  Flavor flavor_;
  Extension extension_;
};

/// Schmidt-correlated state sum_ij rho_ij |ii><jj|, stored by its n x n coefficient matrix.
class SchmidtCorrelated {
 public:
  explicit SchmidtCorrelated(DensityMatrix coeff) : coeff_(std::move(coeff)) {}

  /// Returns the compressed form when every entry outside the |ii><jj| pattern is below `tol`.
  static std::optional<SchmidtCorrelated> detect(const BipartiteState& state, double tol = 1e-10);

  std::size_t dim() const noexcept { return coeff_.dim(); }
  const DensityMatrix& coeff() const noexcept { return coeff_; }
  /// The n^2-dimensional bipartite density matrix.
  BipartiteState state() const;

 private:
  DensityMatrix coeff_;
};

DensityMatrix compress_mc(const SchmidtCorrelated& rho_mc);
SchmidtCorrelated embed_mc(const DensityMatrix& rho);
/// sum_i a_i |i> -> sum_i a_i |ii>.
PureState embed_pure(const PureState& psi);

}  // namespace roofkit
