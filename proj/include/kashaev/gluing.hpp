/**
 * @file gluing.hpp
 * @brief Hyperbolic gluing equations in exponent form and their Gauss–Newton solution.
 *
 * Equation j reads  sign_j · Π_i z_i^{a_ij} (1 - z_i)^{b_ij} = 1.
 * The other two shape parameters of a tetrahedron fit this basis through
 * 1/(1-z) = (1-z)^{-1} and 1 - 1/z = -(1-z) z^{-1}.
 */

#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <complex>
#include <numbers>
#include <string>
#include <vector>

#include "json.hpp"

#include "kashaev/dilog.hpp"
#include "kashaev/errors.hpp"
#include "kashaev/qkernel.hpp"

namespace kashaev {

struct ShapeExponent {
  int z = 0;
  int one_minus_z = 0;

  bool operator==(const ShapeExponent&) const = default;
};

struct GluingEquation {
  int sign = 1;
  std::vector<ShapeExponent> exponents;  // one per shape

  bool operator==(const GluingEquation&) const = default;
};

struct ShapeAssignment {
  std::vector<cplx> shapes;
};

class GluingSystem {
 public:
  GluingSystem(std::vector<GluingEquation> equations, std::vector<std::string> names)
      : equations_(std::move(equations)), names_(std::move(names)) {
    if (equations_.empty()) throw std::invalid_argument("gluing system has no equations");
    shape_count_ = static_cast<int>(equations_.front().exponents.size());
    if (shape_count_ == 0) throw std::invalid_argument("gluing system has no shapes");
    for (std::size_t j = 0; j < equations_.size(); ++j) {
      const GluingEquation& eq = equations_[j];
      if (eq.sign != 1 && eq.sign != -1) {
        throw std::invalid_argument("equation " + std::to_string(j) + ": sign must be +1 or -1");
      }
      if (static_cast<int>(eq.exponents.size()) != shape_count_) {
        throw std::invalid_argument("equation " + std::to_string(j) +
                                    ": exponent count differs from shape count");
      }
    }
    if (names_.empty()) {
      for (std::size_t j = 0; j < equations_.size(); ++j) names_.push_back("eq" + std::to_string(j));
    }
    if (names_.size() != equations_.size()) {
      throw std::invalid_argument("gluing system: names and equations differ in length");
    }
  }

  const std::vector<GluingEquation>& equations() const { return equations_; }
  const std::vector<std::string>& names() const { return names_; }
  int shape_count() const { return shape_count_; }

  bool operator==(const GluingSystem&) const = default;

 private:
  std::vector<GluingEquation> equations_;
  std::vector<std::string> names_;
  int shape_count_ = 0;
};

/// Complete structure on the figure-eight complement, shapes (b, d).
inline GluingSystem figure_eight_gluing_system() {
  return GluingSystem({{-1, {{1, 1}, {-2, 1}}},
                       {-1, {{-1, -1}, {2, -1}}},
                       {1, {{-1, 0}, {1, 0}}},
                       {1, {{2, 0}, {2, -2}}}},
                      {"consistency-1", "consistency-2", "meridian", "longitude"});
}

namespace detail {

inline void require_shape_count(const GluingSystem& sys, const ShapeAssignment& s) {
  if (static_cast<int>(s.shapes.size()) != sys.shape_count()) {
    throw std::invalid_argument("shape assignment has " + std::to_string(s.shapes.size()) +
                                " shapes, system expects " + std::to_string(sys.shape_count()));
  }
}

// Σ a log z + Σ b log(1-z) + log(sign), principal logs, no lift.
inline cplx raw_log_residual(const GluingEquation& eq, const ShapeAssignment& s) {
  cplx r = eq.sign < 0 ? cplx(0.0, std::numbers::pi) : cplx(0.0);
  for (std::size_t i = 0; i < s.shapes.size(); ++i) {
    r += static_cast<double>(eq.exponents[i].z) * std::log(s.shapes[i]);
    r += static_cast<double>(eq.exponents[i].one_minus_z) * std::log(1.0 - s.shapes[i]);
  }
  return r;
}

}  // namespace detail

/// sign · Π z^a (1-z)^b, evaluated multiplicatively.
inline cplx evaluate(const GluingEquation& eq, const ShapeAssignment& s) {
  cplx v = static_cast<double>(eq.sign);
  for (std::size_t i = 0; i < s.shapes.size(); ++i) {
    v *= std::pow(s.shapes[i], eq.exponents[i].z) * std::pow(1.0 - s.shapes[i], eq.exponents[i].one_minus_z);
  }
  return v;
}

/// |evaluate - 1| per equation.
inline std::vector<double> equation_residuals(const GluingSystem& sys, const ShapeAssignment& s) {
  detail::require_shape_count(sys, s);
  std::vector<double> out;
  for (const GluingEquation& eq : sys.equations()) out.push_back(std::abs(evaluate(eq, s) - 1.0));
  return out;
}

struct NewtonOptions {
  double tol = 1e-14;          // target 2-norm of the log residual vector
  double stall_floor = 1e-12;  // stagnation below this counts as converged
  int max_iterations = 100;
};

struct NewtonResult {
  ShapeAssignment shapes;
  int iterations = 0;
  double residual = 0.0;      // final log-residual 2-norm
  std::vector<double> trace;  // log-residual 2-norm per iterate
};

/**
 * Gauss–Newton on the log residuals. The 2πi multiple of each equation is
 * fixed at the initial point; step halving keeps the residual decreasing and
 * every shape in the upper half plane.
 */
inline NewtonResult newton_solve(const GluingSystem& sys, const ShapeAssignment& initial,
                                 const NewtonOptions& opt = {}) {
  detail::require_shape_count(sys, initial);
  for (cplx z : initial.shapes) {
    if (!(z.imag() > 0.0)) throw DomainError("newton_solve: initial shapes need Im z > 0");
  }
  const auto& eqs = sys.equations();
  const Eigen::Index rows = static_cast<Eigen::Index>(eqs.size());
  const Eigen::Index cols = sys.shape_count();
  constexpr double two_pi = 2.0 * std::numbers::pi;

  std::vector<double> lift(eqs.size());
  for (std::size_t j = 0; j < eqs.size(); ++j) {
    lift[j] = -two_pi * std::round(detail::raw_log_residual(eqs[j], initial).imag() / two_pi);
  }
  auto residual = [&](const ShapeAssignment& s) {
    Eigen::VectorXcd r(rows);
    for (Eigen::Index j = 0; j < rows; ++j) {
      r(j) = detail::raw_log_residual(eqs[j], s) + cplx(0.0, lift[j]);
    }
    return r;
  };

  NewtonResult out;
  ShapeAssignment s = initial;
  Eigen::VectorXcd r = residual(s);
  double norm = r.norm();
  for (int it = 0;; ++it) {
    out.trace.push_back(norm);
    if (norm < opt.tol) break;
    if (it == opt.max_iterations) {
      throw ConvergenceError("newton_solve: iteration limit reached", out.trace);
    }
    Eigen::MatrixXcd jac(rows, cols);
    for (Eigen::Index j = 0; j < rows; ++j) {
      for (Eigen::Index i = 0; i < cols; ++i) {
        const cplx z = s.shapes[i];
        jac(j, i) = static_cast<double>(eqs[j].exponents[i].z) / z -
                    static_cast<double>(eqs[j].exponents[i].one_minus_z) / (1.0 - z);
      }
    }
    const Eigen::VectorXcd step = jac.colPivHouseholderQr().solve(-r);

    bool accepted = false;
    bool left_half_plane = false;
    double t = 1.0;
    for (int halving = 0; halving < 40; ++halving, t *= 0.5) {
      ShapeAssignment trial = s;
      bool ok = true;
      for (Eigen::Index i = 0; i < cols; ++i) {
        trial.shapes[i] += t * step(i);
        ok = ok && trial.shapes[i].imag() > 0.0;
      }
      if (!ok) {
        left_half_plane = true;
        continue;
      }
      const Eigen::VectorXcd tr = residual(trial);
      if (tr.norm() < norm) {
        s = trial;
        r = tr;
        norm = tr.norm();
        accepted = true;
        break;
      }
    }
    if (!accepted) {
      if (norm < opt.stall_floor) break;
      if (left_half_plane) {
        throw DomainError("newton_solve: shapes degenerate toward the real line");
      }
      throw ConvergenceError("newton_solve: no descent step found", out.trace);
    }
    out.iterations = it + 1;
  }
  out.shapes = s;
  out.residual = norm;
  return out;
}

/// Σ D(z_i); real (flat) shapes contribute 0.
inline double volume(const ShapeAssignment& s) {
  double v = 0.0;
  for (cplx z : s.shapes) v += bloch_wigner(z);
  return v;
}

// ---------------------------------------------------------------------------
// JSON

inline nlohmann::json to_json(const GluingSystem& sys) {
  nlohmann::json eqs = nlohmann::json::array();
  for (const GluingEquation& eq : sys.equations()) {
    nlohmann::json ex = nlohmann::json::array();
    for (const ShapeExponent& e : eq.exponents) ex.push_back({{"z", e.z}, {"one_minus_z", e.one_minus_z}});
    eqs.push_back({{"sign", eq.sign}, {"exponents", ex}});
  }
  return {{"equations", eqs}, {"names", sys.names()}};
}

/// Throws std::invalid_argument (or nlohmann::json::exception) on malformed input.
inline GluingSystem gluing_system_from_json(const nlohmann::json& j) {
  if (!j.is_object() || !j.contains("equations") || !j.at("equations").is_array()) {
    throw std::invalid_argument("gluing system JSON needs an \"equations\" array");
  }
  std::vector<GluingEquation> eqs;
  for (const auto& je : j.at("equations")) {
    GluingEquation eq;
    eq.sign = je.at("sign").get<int>();
    for (const auto& jx : je.at("exponents")) {
      eq.exponents.push_back({jx.at("z").get<int>(), jx.at("one_minus_z").get<int>()});
    }
    eqs.push_back(std::move(eq));
  }
  std::vector<std::string> names;
  if (j.contains("names")) names = j.at("names").get<std::vector<std::string>>();
  return GluingSystem(std::move(eqs), std::move(names));
}

}  // namespace kashaev
