#include "ppt/spectra.hpp"

#include <algorithm>
#include <sstream>

#include "ppt/errors.hpp"

namespace ppt {

namespace {

int count_below(const RealVector& ev, double threshold) {
  return static_cast<int>((ev.array() < threshold).count());
}

}  // namespace

int theorem1_bound(const BipartiteShape& shape) {
  return shape.total() - std::max(shape.dim_a(), shape.dim_b());
}

int conjecture_bound(int n) {
  if (n < 1) throw ArgumentError("conjecture_bound: n must be >= 1");
  return n * (n - 1) / 2;
}

NegativeSpectrumReport census_from_eigenvalues(const BipartiteShape& shape, const RealVector& ev, double tol) {
  if (!(tol > 0.0)) throw ArgumentError("count_negative: tolerance must be positive");
  if (ev.size() != shape.total()) throw ShapeError("census: eigenvalue count does not match shape");

  NegativeSpectrumReport r;
  r.shape = shape;
  r.eigenvalues.assign(ev.data(), ev.data() + ev.size());
  r.tolerance_used = tol;
  r.negative_count = count_below(ev, -tol);
  r.negative_count_tight = count_below(ev, -tol / 10.0);
  r.negative_count_loose = count_below(ev, -tol * 10.0);
  r.most_negative = std::min(ev(0), 0.0);
  r.negativity = (ev.cwiseAbs().sum() - 1.0) / 2.0;
  r.theorem1_bound = theorem1_bound(shape);
  if (shape.is_square()) r.conjecture_bound = conjecture_bound(shape.dim_a());

  if (r.negative_count > r.theorem1_bound) {
    std::ostringstream os;
    os << "Theorem 1 bound breached: " << r.negative_count << " negative eigenvalues for shape " << shape.dim_a()
       << " x " << shape.dim_b() << " (bound " << r.theorem1_bound << ")";
    throw TheoremViolation(os.str());
  }
  return r;
}

NegativeSpectrumReport count_negative(const DensityMatrix& rho, double tol) {
  const HermitianMatrix pt = partial_transpose(rho.matrix(), rho.shape());
  return census_from_eigenvalues(rho.shape(), hermitian_eigenvalues(pt), tol);
}

double negativity(const DensityMatrix& rho) {
  return (trace_norm(partial_transpose(rho.matrix(), rho.shape())) - 1.0) / 2.0;
}

AbsPtPt abs_pt_pt(const DensityMatrix& rho) {
  const HermitianMatrix abs_pt = operator_abs(partial_transpose(rho.matrix(), rho.shape()));
  HermitianMatrix back = partial_transpose(abs_pt, rho.shape());
  const double lmin = min_eigenvalue(back);
  return {std::move(back), lmin};
}

}  // namespace ppt
