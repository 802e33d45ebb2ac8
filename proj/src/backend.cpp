#include "qbench/backend.hpp"

namespace qbench {

std::string InteriorPointBackend::name() const {
  return settings_.predictor_corrector ? "ipm-hkm-pc" : "ipm-hkm-path";
}

IpmSolution<double> InteriorPointBackend::solve(const StandardSdp<double>& problem) const {
  return solve_standard_sdp(problem, settings_);
}

IpmSolution<cplx> InteriorPointBackend::solve(const StandardSdp<cplx>& problem) const {
  return solve_standard_sdp(problem, settings_);
}

StandardSdp<double> realify(const StandardSdp<cplx>& problem) {
  StandardSdp<double> out;
  for (int n : problem.block_dims) out.block_dims.push_back(2 * n);
  out.lp_dim = problem.lp_dim;
  out.rhs = problem.rhs;
  auto convert = [&problem](const SdpRow<cplx>& row) {
    SdpRow<double> r;
    r.lp = row.lp;
    for (const auto& e : row.psd) {
      const int n = problem.block_dims[static_cast<size_t>(e.block)];
      const double re = 0.5 * e.value.real();
      const double im = 0.5 * e.value.imag();
      if (re != 0.0) {
        r.psd.push_back({e.block, e.row, e.col, re});
        r.psd.push_back({e.block, e.row + n, e.col + n, re});
      }
      if (im != 0.0) {
        r.psd.push_back({e.block, e.row, e.col + n, -im});
        r.psd.push_back({e.block, e.row + n, e.col, im});
      }
    }
    return r;
  };
  out.rows.reserve(problem.rows.size());
  for (const auto& row : problem.rows) out.rows.push_back(convert(row));
  out.cost = convert(problem.cost);
  return out;
}

Eigen::MatrixXcd unrealify(const Eigen::MatrixXd& embedded) {
  const Eigen::Index n = embedded.rows() / 2;
  const Eigen::MatrixXd re = 0.5 * (embedded.topLeftCorner(n, n) + embedded.bottomRightCorner(n, n));
  const Eigen::MatrixXd im = 0.5 * (embedded.bottomLeftCorner(n, n) - embedded.topRightCorner(n, n));
  Eigen::MatrixXcd out(n, n);
  out.real() = re;
  out.imag() = im;
  return out;
}

std::string RealEmbeddingBackend::name() const { return "real-embedding/" + inner_->name(); }

IpmSolution<double> RealEmbeddingBackend::solve(const StandardSdp<double>& problem) const {
  return inner_->solve(problem);
}

IpmSolution<cplx> RealEmbeddingBackend::solve(const StandardSdp<cplx>& problem) const {
  const IpmSolution<double> real = inner_->solve(realify(problem));
  IpmSolution<cplx> out;
  out.status = real.status;
  out.x_lp = real.x_lp;
  out.z_lp = real.z_lp;
  out.y = real.y;
  out.primal_objective = real.primal_objective;
  out.dual_objective = real.dual_objective;
  out.relative_gap = real.relative_gap;
  out.primal_infeasibility = real.primal_infeasibility;
  out.dual_infeasibility = real.dual_infeasibility;
  out.iterations = real.iterations;
  out.reduced_accuracy = real.reduced_accuracy;
  out.message = real.message;
  for (const auto& x : real.X) out.X.push_back(unrealify(x));
  // Z pairs with the embedded X, whose inner product is doubled.
  for (const auto& z : real.Z) out.Z.push_back(2.0 * unrealify(z));
  return out;
}

std::shared_ptr<const SolverBackend> default_backend() {
  static const auto backend = std::make_shared<const InteriorPointBackend>();
  return backend;
}

std::shared_ptr<const SolverBackend> alternate_backend() {
  static const auto backend = [] {
    IpmSettings s;
    s.predictor_corrector = false;
    s.fixed_centering = 0.15;
    s.max_iterations = 300;
    return std::make_shared<const RealEmbeddingBackend>(
        std::make_shared<const InteriorPointBackend>(s));
  }();
  return backend;
}

}  // namespace qbench
