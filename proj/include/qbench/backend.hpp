#pragma once

// Narrow solver-backend interface. A backend receives a lowered standard-form
// problem and returns primal/dual iterates and a status.

#include <memory>
#include <string>

#include "qbench/conic.hpp"
#include "qbench/fock.hpp"
#include "qbench/ipm.hpp"

namespace qbench {

class SolverBackend {
 public:
  virtual ~SolverBackend() = default;
  virtual std::string name() const = 0;
  virtual IpmSolution<double> solve(const StandardSdp<double>& problem) const = 0;
  virtual IpmSolution<cplx> solve(const StandardSdp<cplx>& problem) const = 0;
};

/// Native interior-point solve in the problem's own scalar type.
class InteriorPointBackend : public SolverBackend {
 public:
  explicit InteriorPointBackend(IpmSettings settings = {}) : settings_(settings) {}

  std::string name() const override;
  IpmSolution<double> solve(const StandardSdp<double>& problem) const override;
  IpmSolution<cplx> solve(const StandardSdp<cplx>& problem) const override;

 private:
  IpmSettings settings_;
};

/// Solves complex Hermitian problems through the real symmetric embedding
/// H -> [[Re H, -Im H], [Im H, Re H]], delegating to an inner backend's real
/// solver. Real problems pass straight through.
class RealEmbeddingBackend : public SolverBackend {
 public:
  explicit RealEmbeddingBackend(std::shared_ptr<const SolverBackend> inner)
      : inner_(std::move(inner)) {}

  std::string name() const override;
  IpmSolution<double> solve(const StandardSdp<double>& problem) const override;
  IpmSolution<cplx> solve(const StandardSdp<cplx>& problem) const override;

 private:
  std::shared_ptr<const SolverBackend> inner_;
};

/// Interior point, HKM direction with Mehrotra predictor-corrector.
std::shared_ptr<const SolverBackend> default_backend();

/// Real embedding over a path-following interior point without the
/// corrector step. Used to cross-check the default configuration.
std::shared_ptr<const SolverBackend> alternate_backend();

/// Real symmetric embedding of a complex standard-form problem. The
/// embedded inner product is twice the complex one, so entries are halved.
StandardSdp<double> realify(const StandardSdp<cplx>& problem);

/// Hermitian matrix represented by a (possibly unstructured) embedded block.
Eigen::MatrixXcd unrealify(const Eigen::MatrixXd& embedded);

template <class Scalar>
struct ModelSolution {
  IpmSolution<Scalar> raw;
  /// Values of the model's variables.
  std::vector<Matrix<Scalar>> values;
};

template <class Scalar>
ModelSolution<Scalar> solve_model(const ConicModel<Scalar>& model, const SolverBackend& backend) {
  ModelSolution<Scalar> out;
  LoweringMap map;
  const StandardSdp<Scalar> sdp = lower_model(model, &map);
  out.raw = backend.solve(sdp);
  for (int v = 0; v < map.num_variables; ++v) {
    if (static_cast<size_t>(v) < out.raw.X.size()) {
      out.values.push_back(out.raw.X[static_cast<size_t>(v)]);
    } else {
      const int n = model.variables()[static_cast<size_t>(v)].dim;
      out.values.push_back(Matrix<Scalar>::Zero(n, n));
    }
  }
  return out;
}

}  // namespace qbench
