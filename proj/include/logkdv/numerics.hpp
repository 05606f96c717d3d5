#pragma once

#include <functional>
#include <span>
#include <vector>

#include "logkdv/errors.hpp"

namespace logkdv {

// Vector field callback: writes dy/dt into dydt (same size as y).
using Rhs = std::function<void(double t, std::span<const double> y, std::span<double> dydt)>;

struct IvpOptions {
    double rel_tol = 1e-10;
    double abs_tol = 1e-12;
    double initial_step = 0.0;  // 0 = choose automatically
    double max_step = 0.0;      // 0 = whole interval
    std::size_t max_steps = 20'000'000;
};

// One accepted Dormand-Prince step together with its quartic interpolant.
// eval() is valid for t in [t0, t0+h] (or the reversed interval for h < 0).
struct DenseStep {
    double t0 = 0.0;
    double h = 0.0;
    std::vector<double> r1, r2, r3, r4, r5;

    std::size_t dim() const { return r1.size(); }
    double eval(double t, std::size_t i) const;
    void eval(double t, std::span<double> y) const;
};

// Adaptive embedded 5(4) Dormand-Prince stepper with dense output (FSAL form).
class DormandPrince5 {
  public:
    DormandPrince5(Rhs rhs, std::span<const double> y0, double t0, double t_end,
                   const IvpOptions& opt = {});

    // Advance one accepted step (never past t_end). Returns false once t_end
    // is reached.
    bool step();

    double t() const { return t_; }
    bool done() const { return done_; }
    double suggested_step() const { return h_; }
    std::span<const double> y() const { return y_; }
    const DenseStep& last_step() const { return dense_; }
    std::size_t steps_taken() const { return n_accepted_; }

    // Continue the same trajectory toward a new end time (forward only).
    void extend(double t_end);

  private:
    void eval_rhs(double t, std::span<const double> y, std::span<double> f);
    double initial_step_size();

    Rhs rhs_;
    std::size_t n_;
    double t_, t_end_, dir_;
    IvpOptions opt_;
    bool done_ = false, first_ = true;
    std::size_t n_accepted_ = 0, n_steps_ = 0;
    double h_ = 0.0;
    std::vector<double> y_, k1_, k2_, k3_, k4_, k5_, k6_, k7_, ytmp_;
    DenseStep dense_;
};

// Dense-output trajectory over [t0, t_end].
class Trajectory {
  public:
    double t_begin() const { return t0_; }
    double t_end() const { return t1_; }
    std::size_t dim() const { return dim_; }
    std::span<const double> final_state() const { return yf_; }
    std::size_t step_count() const { return steps_.size(); }

    // Interpolate the solution at time t (clamped to the integration range).
    void eval(double t, std::span<double> y) const;
    double eval(double t, std::size_t component) const;

  private:
    friend Trajectory integrate(const Rhs&, std::span<const double>, double, double,
                                const IvpOptions&);
    std::vector<DenseStep> steps_;
    std::vector<double> yf_;
    double t0_ = 0, t1_ = 0;
    std::size_t dim_ = 0;
};

Trajectory integrate(const Rhs& rhs, std::span<const double> y0, double t0, double t_end,
                     const IvpOptions& opt = {});

enum class EventDirection { rising, falling, any };

struct EventSpec {
    std::function<double(double t, std::span<const double> y)> fn;
    EventDirection direction = EventDirection::any;
    double refine_tol = 1e-10;
};

struct EventResult {
    double t = 0.0;
    std::vector<double> y;
};

// Integrate until the event function crosses zero (strictly after t0).
// Throws EventNotFound if no crossing occurs before t_max.
EventResult integrate_until_event(const Rhs& rhs, std::span<const double> y0, double t0,
                                  double t_max, const EventSpec& event,
                                  const IvpOptions& opt = {});

// As above but the crossing must also satisfy `accept`; earlier crossings are
// skipped.
EventResult integrate_until_event(const Rhs& rhs, std::span<const double> y0, double t0,
                                  double t_max, const EventSpec& event,
                                  const std::function<bool(double, std::span<const double>)>& accept,
                                  const IvpOptions& opt = {});

// Root of f on [a,b] with f(a)*f(b) <= 0, located by Brent's method.
double find_root(const std::function<double(double)>& f, double a, double b,
                 double xtol = 1e-14, int max_iter = 200);

// Root of a smooth scalar function by bisection to |f| <= ftol followed by a
// guarded Newton polish (derivative optional).
double bisect_refine(const std::function<double(double)>& f, double a, double b, double ftol,
                     const std::function<double(double)>& df = nullptr);

// Dense symmetric matrix with symmetric assignment.
class SymmetricMatrix {
  public:
    explicit SymmetricMatrix(int order);

    int order() const { return order_; }
    double operator()(int i, int j) const { return data_[static_cast<std::size_t>(i) * order_ + j]; }
    void set(int i, int j, double v);
    void add(int i, int j, double v);
    std::span<const double> data() const { return data_; }

    // max_i sum_j |a_ij|
    double inf_norm() const;
    // y = M x
    void multiply(std::span<const double> x, std::span<double> y) const;

  private:
    int order_;
    std::vector<double> data_;
};

struct EigenDecomposition {
    int order = 0;
    std::vector<double> values;   // ascending
    std::vector<double> vectors;  // column-major, vectors[k*order + i] = v_k(i)
    std::span<const double> vector(int k) const {
        return {vectors.data() + static_cast<std::size_t>(k) * order, static_cast<std::size_t>(order)};
    }
};

// Full symmetric eigendecomposition, eigenvalues ascending, eigenvectors
// orthonormal. Throws NoConvergenceError if the solver fails.
EigenDecomposition eigen_sym(const SymmetricMatrix& m);

// Periodic trapezoid quadrature of uniform samples over one period of length L
// (spectrally accurate for smooth periodic integrands).
double periodic_quadrature(std::span<const double> samples, double length);

}  // namespace logkdv
