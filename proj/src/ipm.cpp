#include "qbench/ipm.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>

namespace qbench {

const char* to_string(IpmStatus status) {
  switch (status) {
    case IpmStatus::Optimal: return "Optimal";
    case IpmStatus::PrimalInfeasible: return "PrimalInfeasible";
    case IpmStatus::DualInfeasible: return "DualInfeasible";
    case IpmStatus::MaxIterations: return "MaxIterations";
    case IpmStatus::NumericalTrouble: return "NumericalTrouble";
  }
  return "Unknown";
}

namespace {

// The solver core is generic over the working scalar W (double, long double
// or their complex counterparts); input and output stay in double.
template <class W>
using RealOf = typename Eigen::NumTraits<W>::Real;
template <class W>
using VecOf = Eigen::Matrix<RealOf<W>, Eigen::Dynamic, 1>;
template <class W>
using MatOf = Eigen::Matrix<RealOf<W>, Eigen::Dynamic, Eigen::Dynamic>;

template <class S>
struct Widened {
  using type = long double;
};
template <>
struct Widened<std::complex<double>> {
  using type = std::complex<long double>;
};

template <class W>
RealOf<W> re(const W& v) {
  if constexpr (is_complex_v<W>) {
    return v.real();
  } else {
    return v;
  }
}

template <class W>
RealOf<W> inner(const Matrix<W>& a, const Matrix<W>& b) {
  return re(W(a.conjugate().cwiseProduct(b).sum()));
}

template <class W>
Matrix<W> hermitian_part(const Matrix<W>& m) {
  return (m + m.adjoint()) * RealOf<W>(0.5);
}

// Primal or dual point: PSD blocks plus the nonnegative orthant.
template <class W>
struct Point {
  std::vector<Matrix<W>> blocks;
  VecOf<W> lp;

  Point& axpy(RealOf<W> alpha, const Point& d) {
    for (size_t k = 0; k < blocks.size(); ++k) blocks[k] += alpha * d.blocks[k];
    lp += alpha * d.lp;
    return *this;
  }
};

template <class W>
RealOf<W> inner(const Point<W>& a, const Point<W>& b) {
  RealOf<W> acc = a.lp.dot(b.lp);
  for (size_t k = 0; k < a.blocks.size(); ++k) acc += inner(a.blocks[k], b.blocks[k]);
  return acc;
}

template <class W>
RealOf<W> norm(const Point<W>& a) {
  RealOf<W> acc = a.lp.squaredNorm();
  for (const auto& b : a.blocks) acc += b.squaredNorm();
  return std::sqrt(acc);
}

template <class S, class W>
class InteriorPoint {
 public:
  using Real = RealOf<W>;
  using Vec = VecOf<W>;
  using Mat = MatOf<W>;

  InteriorPoint(const StandardSdp<S>& problem, const IpmSettings& settings)
      : p_(problem), s_(settings), m_(problem.num_rows()) {
    rhs_ = p_.rhs.template cast<Real>();
    index_rows();
    cost_ = zeros();
    for (const auto& e : p_.cost.psd) cost_.blocks[static_cast<size_t>(e.block)](e.row, e.col) += W(e.value);
    for (const auto& [col, a] : p_.cost.lp) cost_.lp(col) += Real(a);
    nu_ = p_.lp_dim;
    for (int n : p_.block_dims) nu_ += n;
  }

  IpmSolution<S> run();

 private:
  struct Slice {
    int row;
    int begin;
    int end;
  };
  struct Entry {
    int row;
    int col;
    W value;
  };

  void index_rows();
  Point<W> zeros() const;
  Vec apply(const Point<W>& x) const;
  Point<W> apply_adjoint(const Vec& y) const;
  void initial_point(Point<W>& x, Point<W>& z) const;
  Mat schur(const Point<W>& x, const Point<W>& zinv) const;
  bool factor(const Mat& schur);
  Vec solve_schur(const Vec& rhs) const;
  Real max_step(const Point<W>& x, const Point<W>& dx) const;

  const StandardSdp<S>& p_;
  const IpmSettings& s_;
  int m_;
  Real nu_ = 0;
  Vec rhs_;
  std::vector<Entry> flat_;
  std::vector<std::vector<Slice>> slices_;
  std::vector<std::vector<std::pair<int, Real>>> lp_cols_;
  Point<W> cost_;
  Eigen::LLT<Mat> llt_;
  Eigen::LDLT<Mat> ldlt_;
  Mat schur_;
  bool use_ldlt_ = false;
};

template <class S, class W>
void InteriorPoint<S, W>::index_rows() {
  const size_t nblocks = p_.block_dims.size();
  std::vector<std::vector<std::pair<int, Entry>>> per_block(nblocks);
  for (int i = 0; i < m_; ++i) {
    for (const auto& e : p_.rows[static_cast<size_t>(i)].psd) {
      per_block[static_cast<size_t>(e.block)].push_back({i, Entry{e.row, e.col, W(e.value)}});
    }
  }
  slices_.assign(nblocks, {});
  for (size_t b = 0; b < nblocks; ++b) {
    auto& entries = per_block[b];
    std::stable_sort(entries.begin(), entries.end(),
                     [](const auto& a, const auto& c) { return a.first < c.first; });
    size_t k = 0;
    while (k < entries.size()) {
      const int row = entries[k].first;
      const int begin = static_cast<int>(flat_.size());
      while (k < entries.size() && entries[k].first == row) flat_.push_back(entries[k++].second);
      slices_[b].push_back({row, begin, static_cast<int>(flat_.size())});
    }
  }
  lp_cols_.assign(static_cast<size_t>(p_.lp_dim), {});
  for (int i = 0; i < m_; ++i) {
    for (const auto& [col, a] : p_.rows[static_cast<size_t>(i)].lp) {
      lp_cols_[static_cast<size_t>(col)].push_back({i, Real(a)});
    }
  }
}

template <class S, class W>
Point<W> InteriorPoint<S, W>::zeros() const {
  Point<W> z;
  for (int n : p_.block_dims) z.blocks.push_back(Matrix<W>::Zero(n, n));
  z.lp = Vec::Zero(p_.lp_dim);
  return z;
}

template <class S, class W>
typename InteriorPoint<S, W>::Vec InteriorPoint<S, W>::apply(const Point<W>& x) const {
  Vec out = Vec::Zero(m_);
  for (size_t b = 0; b < slices_.size(); ++b) {
    const auto& X = x.blocks[b];
    for (const auto& sl : slices_[b]) {
      W acc{};
      for (int t = sl.begin; t < sl.end; ++t) {
        const auto& e = flat_[static_cast<size_t>(t)];
        acc += e.value * X(e.col, e.row);
      }
      out(sl.row) += re(acc);
    }
  }
  for (size_t k = 0; k < lp_cols_.size(); ++k) {
    for (const auto& [row, a] : lp_cols_[k]) out(row) += a * x.lp(static_cast<int>(k));
  }
  return out;
}

template <class S, class W>
Point<W> InteriorPoint<S, W>::apply_adjoint(const Vec& y) const {
  Point<W> out = zeros();
  for (size_t b = 0; b < slices_.size(); ++b) {
    auto& Y = out.blocks[b];
    for (const auto& sl : slices_[b]) {
      const Real yi = y(sl.row);
      if (yi == 0) continue;
      for (int t = sl.begin; t < sl.end; ++t) {
        const auto& e = flat_[static_cast<size_t>(t)];
        Y(e.row, e.col) += yi * e.value;
      }
    }
  }
  for (size_t k = 0; k < lp_cols_.size(); ++k) {
    for (const auto& [row, a] : lp_cols_[k]) out.lp(static_cast<int>(k)) += a * y(row);
  }
  return out;
}

template <class S, class W>
void InteriorPoint<S, W>::initial_point(Point<W>& x, Point<W>& z) const {
  const size_t nblocks = p_.block_dims.size();
  std::vector<Real> max_norm(nblocks + 1, 0);
  std::vector<Real> max_ratio(nblocks + 1, 0);
  for (int i = 0; i < m_; ++i) {
    std::vector<Real> sq(nblocks + 1, 0);
    const auto& row = p_.rows[static_cast<size_t>(i)];
    for (const auto& e : row.psd) sq[static_cast<size_t>(e.block)] += std::norm(e.value);
    for (const auto& [col, a] : row.lp) sq[nblocks] += a * a;
    for (size_t k = 0; k <= nblocks; ++k) {
      const Real nrm = std::sqrt(sq[k]);
      if (nrm == 0) continue;
      max_norm[k] = std::max(max_norm[k], nrm);
      max_ratio[k] = std::max(max_ratio[k], (1 + std::abs(rhs_(i))) / (1 + nrm));
    }
  }
  x = zeros();
  z = zeros();
  for (size_t k = 0; k <= nblocks; ++k) {
    const bool lp = (k == nblocks);
    const Real n = lp ? p_.lp_dim : p_.block_dims[k];
    if (n == 0) continue;
    const Real cost_norm = lp ? cost_.lp.norm() : cost_.blocks[k].norm();
    const Real xi = std::max({Real(10), std::sqrt(n), n * max_ratio[k]});
    const Real eta = std::max({Real(10), std::sqrt(n), max_norm[k], cost_norm});
    if (lp) {
      x.lp.setConstant(xi);
      z.lp.setConstant(eta);
    } else {
      x.blocks[k] = xi * Matrix<W>::Identity(p_.block_dims[k], p_.block_dims[k]);
      z.blocks[k] = eta * Matrix<W>::Identity(p_.block_dims[k], p_.block_dims[k]);
    }
  }
}

template <class S, class W>
typename InteriorPoint<S, W>::Mat InteriorPoint<S, W>::schur(const Point<W>& x,
                                                             const Point<W>& zinv) const {
  Mat M = Mat::Zero(m_, m_);
  // M_ij = Re tr(A_i X A_j Z^-1). With A_i = sum a_t E(p_t, q_t) and
  // A_j = sum b_s E(r_s, c_s) this is Re sum a_t b_s X(q_t, r_s) Zinv(c_s, p_t).
  for (size_t b = 0; b < slices_.size(); ++b) {
    const auto& X = x.blocks[b];
    const auto& Wz = zinv.blocks[b];
    const auto& slices = slices_[b];
    for (size_t ia = 0; ia < slices.size(); ++ia) {
      const Slice& sa = slices[ia];
      for (size_t ib = ia; ib < slices.size(); ++ib) {
        const Slice& sb = slices[ib];
        W acc{};
        for (int t = sa.begin; t < sa.end; ++t) {
          const auto& et = flat_[static_cast<size_t>(t)];
          for (int s = sb.begin; s < sb.end; ++s) {
            const auto& es = flat_[static_cast<size_t>(s)];
            acc += et.value * es.value * X(et.col, es.row) * Wz(es.col, et.row);
          }
        }
        M(sa.row, sb.row) += re(acc);
      }
    }
  }
  for (size_t k = 0; k < lp_cols_.size(); ++k) {
    const Real w = x.lp(static_cast<int>(k)) * zinv.lp(static_cast<int>(k));
    const auto& col = lp_cols_[k];
    for (size_t a = 0; a < col.size(); ++a) {
      for (size_t c = a; c < col.size(); ++c) {
        const int i = std::min(col[a].first, col[c].first);
        const int j = std::max(col[a].first, col[c].first);
        M(i, j) += w * col[a].second * col[c].second;
        if (a != c && col[a].first == col[c].first) M(i, j) += w * col[a].second * col[c].second;
      }
    }
  }
  M.template triangularView<Eigen::StrictlyLower>() = M.transpose();
  return M;
}

template <class S, class W>
bool InteriorPoint<S, W>::factor(const Mat& schur) {
  use_ldlt_ = false;
  schur_ = schur;
  llt_.compute(schur);
  if (llt_.info() == Eigen::Success) return true;
  const Real scale = std::max(Real(1), schur.diagonal().cwiseAbs().maxCoeff());
  const Real eps = std::numeric_limits<Real>::epsilon();
  for (Real shift : {Real(50) * eps, Real(5000) * eps, Real(500000) * eps}) {
    Mat regularized = schur;
    regularized.diagonal().array() += shift * scale;
    llt_.compute(regularized);
    if (llt_.info() == Eigen::Success) return true;
  }
  ldlt_.compute(schur);
  use_ldlt_ = true;
  return ldlt_.info() == Eigen::Success;
}

template <class S, class W>
typename InteriorPoint<S, W>::Vec InteriorPoint<S, W>::solve_schur(const Vec& rhs) const {
  auto solve = [this](const Vec& r) { return use_ldlt_ ? Vec(ldlt_.solve(r)) : Vec(llt_.solve(r)); };
  // A few rounds of iterative refinement against the unregularized matrix.
  const Real eps = std::numeric_limits<Real>::epsilon();
  Vec x = solve(rhs);
  for (int k = 0; k < 3; ++k) {
    const Vec r = rhs - schur_ * x;
    if (r.norm() <= 5 * eps * rhs.norm()) break;
    x += solve(r);
  }
  return x;
}

template <class S, class W>
typename InteriorPoint<S, W>::Real InteriorPoint<S, W>::max_step(const Point<W>& x,
                                                                 const Point<W>& dx) const {
  Real step = std::numeric_limits<Real>::infinity();
  for (size_t b = 0; b < x.blocks.size(); ++b) {
    Eigen::LLT<Matrix<W>> llt(x.blocks[b]);
    if (llt.info() != Eigen::Success) return 0;
    const Matrix<W> t = llt.matrixL().solve(dx.blocks[b]);
    Matrix<W> w = llt.matrixL().solve(t.adjoint());
    w = hermitian_part<W>(w);
    Eigen::SelfAdjointEigenSolver<Matrix<W>> eig(w, Eigen::EigenvaluesOnly);
    const Real lmin = eig.eigenvalues().minCoeff();
    if (lmin < 0) step = std::min(step, -1 / lmin);
  }
  for (int k = 0; k < x.lp.size(); ++k) {
    if (dx.lp(k) < 0) step = std::min(step, -x.lp(k) / dx.lp(k));
  }
  return step;
}

template <class S, class W>
IpmSolution<S> InteriorPoint<S, W>::run() {
  IpmSolution<S> out;
  Point<W> X, Z;
  initial_point(X, Z);
  Vec y = Vec::Zero(m_);

  const Real b_norm = rhs_.norm();
  const Real c_norm = norm(cost_);
  Real best_measure = std::numeric_limits<Real>::infinity();
  int since_best = 0;
  struct Snapshot {
    Point<W> X, Z;
    Vec y;
    IpmSolution<S> stats;
  };
  Snapshot best;

  auto finish = [&](IpmStatus status, std::string message) {
    out.status = status;
    out.message = std::move(message);
    out.X.clear();
    out.Z.clear();
    for (const auto& b : X.blocks) out.X.push_back(b.template cast<S>());
    for (const auto& b : Z.blocks) out.Z.push_back(b.template cast<S>());
    out.x_lp = X.lp.template cast<double>();
    out.z_lp = Z.lp.template cast<double>();
    out.y = y.template cast<double>();
    return out;
  };

  for (int iter = 0;; ++iter) {
    const Vec rp = rhs_ - apply(X);
    Point<W> rd = cost_;
    rd.axpy(-1, Z).axpy(-1, apply_adjoint(y));

    const Real pobj = inner(cost_, X);
    const Real dobj = rhs_.dot(y);
    const Real gap = inner(X, Z);
    const Real mu = gap / nu_;
    const Real scale = 1 + std::abs(pobj) + std::abs(dobj);
    const Real relgap = std::abs(pobj - dobj) / scale;
    const Real pinf = rp.norm() / (1 + b_norm);
    const Real dinf = norm(rd) / (1 + c_norm);
    out.primal_objective = static_cast<double>(pobj);
    out.dual_objective = static_cast<double>(dobj);
    out.relative_gap = static_cast<double>(relgap);
    out.primal_infeasibility = static_cast<double>(pinf);
    out.dual_infeasibility = static_cast<double>(dinf);
    out.iterations = iter;
    const Real measure = std::max({relgap, pinf, dinf, gap / scale});
    // The iterate that balances gap and infeasibilities best is what a
    // stalled run falls back to.
    const Real stall_measure = std::max({relgap, pinf, dinf});
    if (stall_measure < Real(0.9) * best_measure || best_measure > Real(1e-3)) {
      since_best = 0;
    } else {
      ++since_best;
    }
    if (stall_measure < best_measure) {
      best_measure = stall_measure;
      best = {X, Z, y, out};
    }

    if (s_.verbose) {
      std::fprintf(stderr, "ipm%s %3d  pobj % .12e  dobj % .12e  gap %.2e  pinf %.2e  dinf %.2e\n",
                   sizeof(Real) > sizeof(double) ? "(ext)" : "", iter, out.primal_objective,
                   out.dual_objective, out.relative_gap, out.primal_infeasibility,
                   out.dual_infeasibility);
    }
    if (measure <= s_.tolerance) return finish(IpmStatus::Optimal, "converged");

    // Certificates of infeasibility: a dual ray (A^T y + Z ~ 0, b^T y > 0)
    // or a primal ray (A(X) ~ 0, <C, X> < 0).
    if (dobj > 0) {
      Point<W> ray = Z;
      ray.axpy(1, apply_adjoint(y));
      if (norm(ray) / dobj < s_.infeasibility_tolerance) {
        return finish(IpmStatus::PrimalInfeasible, "dual ray certifies primal infeasibility");
      }
    }
    if (pobj < 0) {
      if (apply(X).norm() / -pobj < s_.infeasibility_tolerance) {
        return finish(IpmStatus::DualInfeasible, "primal ray certifies dual infeasibility");
      }
    }
    if (iter >= s_.max_iterations || since_best >= s_.stall_iterations) break;

    Point<W> Zinv = zeros();
    bool ok = true;
    for (size_t b = 0; b < Z.blocks.size(); ++b) {
      Eigen::LLT<Matrix<W>> llt(Z.blocks[b]);
      if (llt.info() != Eigen::Success) {
        ok = false;
        break;
      }
      const int n = p_.block_dims[b];
      Zinv.blocks[b] = hermitian_part<W>(llt.solve(Matrix<W>::Identity(n, n)));
    }
    if (!ok || (Z.lp.size() > 0 && Z.lp.minCoeff() <= 0)) break;
    Zinv.lp = Z.lp.cwiseInverse();

    if (!factor(schur(X, Zinv))) break;

    // X Rd Z^-1 is shared by predictor and corrector.
    Point<W> xrdz = zeros();
    for (size_t b = 0; b < X.blocks.size(); ++b) {
      xrdz.blocks[b] = X.blocks[b] * rd.blocks[b] * Zinv.blocks[b];
    }
    xrdz.lp = X.lp.cwiseProduct(rd.lp).cwiseProduct(Zinv.lp);
    const Vec a_xrdz = apply(xrdz);

    // Given the complementarity residual Rc, the HKM direction is
    //   M dy = Rp - A(Rc) + A(X Rd Z^-1),  dZ = Rd - A^T dy,
    //   dX = herm(Rc - X dZ Z^-1).
    auto direction = [&](const Point<W>& rc, Point<W>& dx, Point<W>& dz, Vec& dy) {
      dy = solve_schur(rp - apply(rc) + a_xrdz);
      dz = rd;
      dz.axpy(-1, apply_adjoint(dy));
      dx = zeros();
      for (size_t b = 0; b < X.blocks.size(); ++b) {
        dx.blocks[b] = hermitian_part<W>(rc.blocks[b] - X.blocks[b] * dz.blocks[b] * Zinv.blocks[b]);
      }
      dx.lp = rc.lp - X.lp.cwiseProduct(dz.lp).cwiseProduct(Zinv.lp);
    };

    Point<W> dx, dz;
    Vec dy;
    const Real one = 1;

    if (s_.predictor_corrector) {
      Point<W> rc = X;
      for (auto& b : rc.blocks) b = -b;
      rc.lp = -rc.lp;
      direction(rc, dx, dz, dy);
      const Real ap = std::min(one, max_step(X, dx));
      const Real ad = std::min(one, max_step(Z, dz));
      Point<W> xa = X;
      xa.axpy(ap, dx);
      Point<W> za = Z;
      za.axpy(ad, dz);
      const Real mu_aff = inner(xa, za) / nu_;
      const Real expon = std::max(one, 3 * std::min(ap, ad) * std::min(ap, ad));
      const Real sigma = std::min(one, std::pow(std::max(mu_aff, Real(0)) / mu, expon));

      Point<W> rc2 = zeros();
      for (size_t b = 0; b < X.blocks.size(); ++b) {
        rc2.blocks[b] = sigma * mu * Zinv.blocks[b] - X.blocks[b] -
                        dx.blocks[b] * dz.blocks[b] * Zinv.blocks[b];
      }
      rc2.lp = sigma * mu * Zinv.lp - X.lp - dx.lp.cwiseProduct(dz.lp).cwiseProduct(Zinv.lp);
      direction(rc2, dx, dz, dy);
    } else {
      const Real sigma = s_.fixed_centering;
      Point<W> rc = zeros();
      for (size_t b = 0; b < X.blocks.size(); ++b) {
        rc.blocks[b] = sigma * mu * Zinv.blocks[b] - X.blocks[b];
      }
      rc.lp = sigma * mu * Zinv.lp - X.lp;
      direction(rc, dx, dz, dy);
    }

    const Real max_p = max_step(X, dx);
    const Real max_d = max_step(Z, dz);
    const Real gamma = Real(0.9) + Real(0.09) * std::min({one, max_p, max_d});
    const Real alpha_p = std::min(one, gamma * max_p);
    const Real alpha_d = std::min(one, gamma * max_d);
    if (alpha_p < Real(1e-10) && alpha_d < Real(1e-10)) break;

    X.axpy(alpha_p, dx);
    Z.axpy(alpha_d, dz);
    y += alpha_d * dy;
  }

  // Stalled or out of iterations. Accept the best point seen if it reached
  // the fallback accuracy; otherwise report the failure.
  const bool exhausted = out.iterations >= s_.max_iterations;
  if (best.y.size() == m_) {
    const auto st = best.stats;
    X = std::move(best.X);
    Z = std::move(best.Z);
    y = std::move(best.y);
    out = st;
    if (st.primal_infeasibility <= s_.fallback_tolerance &&
        st.dual_infeasibility <= s_.fallback_tolerance && st.relative_gap <= s_.fallback_gap) {
      out.reduced_accuracy = true;
      return finish(IpmStatus::Optimal, "stalled at reduced accuracy");
    }
  }
  return finish(exhausted ? IpmStatus::MaxIterations : IpmStatus::NumericalTrouble, "no convergence");
}

template <class S>
double accuracy(const IpmSolution<S>& s) {
  return std::max({s.relative_gap, s.primal_infeasibility, s.dual_infeasibility});
}

}  // namespace

template <class Scalar>
IpmSolution<Scalar> solve_standard_sdp(const StandardSdp<Scalar>& problem,
                                       const IpmSettings& settings) {
  if (problem.rhs.size() != problem.num_rows()) {
    throw DimensionMismatch("solve_standard_sdp: rhs length differs from number of rows");
  }
  IpmSolution<Scalar> first = InteriorPoint<Scalar, Scalar>(problem, settings).run();
  const bool converged = first.status == IpmStatus::Optimal && !first.reduced_accuracy;
  const bool certified = first.status == IpmStatus::PrimalInfeasible ||
                         first.status == IpmStatus::DualInfeasible;
  if (converged || certified || problem.num_rows() > settings.extended_max_rows) return first;

  // Degenerate problems stall in double precision once the Schur complement
  // loses too many digits; a cold restart in long double goes further.
  using Wide = typename Widened<Scalar>::type;
  IpmSolution<Scalar> second = InteriorPoint<Scalar, Wide>(problem, settings).run();
  second.extended_precision = true;
  const bool second_ok = second.status == IpmStatus::Optimal;
  const bool first_ok = first.status == IpmStatus::Optimal;
  if (second_ok && (!first_ok || accuracy(second) < accuracy(first))) return second;
  if (!first_ok && (second.status == IpmStatus::PrimalInfeasible ||
                    second.status == IpmStatus::DualInfeasible)) {
    return second;
  }
  return first;
}

template IpmSolution<double> solve_standard_sdp(const StandardSdp<double>&, const IpmSettings&);
template IpmSolution<std::complex<double>> solve_standard_sdp(
    const StandardSdp<std::complex<double>>&, const IpmSettings&);

}  // namespace qbench
