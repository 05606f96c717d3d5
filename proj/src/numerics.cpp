#include "logkdv/numerics.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>

namespace logkdv {

namespace {

// Dormand-Prince 5(4) tableau (Hairer, Norsett & Wanner I, table 5.2).
constexpr double a21 = 1.0 / 5;
constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                 a54 = -212.0 / 729;
constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                 a64 = 49.0 / 176, a65 = -5103.0 / 18656;
constexpr double a71 = 35.0 / 384, a73 = 500.0 / 1113, a74 = 125.0 / 192,
                 a75 = -2187.0 / 6784, a76 = 11.0 / 84;
constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920,
                 e5 = -17253.0 / 339200, e6 = 22.0 / 525, e7 = -1.0 / 40;
// Quartic dense-output weights (dopri5.f).
constexpr double d1 = -12715105075.0 / 11282082432.0;
constexpr double d3 = 87487479700.0 / 32700410799.0;
constexpr double d4 = -10690763975.0 / 1880347072.0;
constexpr double d5 = 701980252875.0 / 199316789632.0;
constexpr double d6 = -1453857185.0 / 822651844.0;
constexpr double d7 = 69997945.0 / 29380423.0;

constexpr double uround = std::numeric_limits<double>::epsilon();

bool all_finite(std::span<const double> v) {
    for (double x : v)
        if (!std::isfinite(x)) return false;
    return true;
}

}  // namespace

double DenseStep::eval(double t, std::size_t i) const {
    const double th = (t - t0) / h;
    const double th1 = 1.0 - th;
    return r1[i] + th * (r2[i] + th1 * (r3[i] + th * (r4[i] + th1 * r5[i])));
}

void DenseStep::eval(double t, std::span<double> y) const {
    const double th = (t - t0) / h;
    const double th1 = 1.0 - th;
    for (std::size_t i = 0; i < r1.size(); ++i)
        y[i] = r1[i] + th * (r2[i] + th1 * (r3[i] + th * (r4[i] + th1 * r5[i])));
}

DormandPrince5::DormandPrince5(Rhs rhs, std::span<const double> y0, double t0, double t_end,
                               const IvpOptions& opt)
    : rhs_(std::move(rhs)),
      n_(y0.size()),
      t_(t0),
      t_end_(t_end),
      dir_(t_end >= t0 ? 1.0 : -1.0),
      opt_(opt),
      y_(y0.begin(), y0.end()),
      k1_(n_), k2_(n_), k3_(n_), k4_(n_), k5_(n_), k6_(n_), k7_(n_), ytmp_(n_) {
    dense_.r1.resize(n_);
    dense_.r2.resize(n_);
    dense_.r3.resize(n_);
    dense_.r4.resize(n_);
    dense_.r5.resize(n_);
    if (t_end == t0) {
        done_ = true;
        return;
    }
    eval_rhs(t_, y_, k1_);
    if (!all_finite(k1_)) throw NonFiniteRhs("non-finite right-hand side at initial state");
    h_ = opt_.initial_step != 0.0 ? std::abs(opt_.initial_step) * dir_ : initial_step_size();
}

void DormandPrince5::eval_rhs(double t, std::span<const double> y, std::span<double> f) {
    rhs_(t, y, f);
}

double DormandPrince5::initial_step_size() {
    const double hmax = opt_.max_step > 0 ? opt_.max_step : std::abs(t_end_ - t_);
    double d0 = 0, d1n = 0;
    for (std::size_t i = 0; i < n_; ++i) {
        const double sc = opt_.abs_tol + opt_.rel_tol * std::abs(y_[i]);
        d0 += (y_[i] / sc) * (y_[i] / sc);
        d1n += (k1_[i] / sc) * (k1_[i] / sc);
    }
    d0 = std::sqrt(d0 / n_);
    d1n = std::sqrt(d1n / n_);
    double h0 = (d0 < 1e-5 || d1n < 1e-5) ? 1e-6 : 0.01 * d0 / d1n;
    h0 = std::min(h0, hmax);
    for (std::size_t i = 0; i < n_; ++i) ytmp_[i] = y_[i] + dir_ * h0 * k1_[i];
    eval_rhs(t_ + dir_ * h0, ytmp_, k2_);
    double d2 = 0;
    for (std::size_t i = 0; i < n_; ++i) {
        const double sc = opt_.abs_tol + opt_.rel_tol * std::abs(y_[i]);
        const double diff = (k2_[i] - k1_[i]) / sc;
        d2 += diff * diff;
    }
    d2 = std::sqrt(d2 / n_) / h0;
    double h1;
    const double dm = std::max(d1n, d2);
    if (dm <= 1e-15)
        h1 = std::max(1e-6, h0 * 1e-3);
    else
        h1 = std::pow(0.01 / dm, 0.2);
    return dir_ * std::min({100 * h0, h1, hmax});
}

bool DormandPrince5::step() {
    if (done_) return false;
    const double hmax = opt_.max_step > 0 ? opt_.max_step : std::abs(t_end_ - t_);
    bool last = false;
    bool rejected = false;
    while (true) {
        if (++n_steps_ > opt_.max_steps)
            throw ConvergenceFailure("integrator exceeded the step budget");
        if (std::abs(h_) > hmax) h_ = dir_ * hmax;
        if ((t_ + 1.01 * h_ - t_end_) * dir_ > 0.0) {
            h_ = t_end_ - t_;
            last = true;
        } else {
            last = false;
        }
        if (0.1 * std::abs(h_) <= std::abs(t_) * uround)
            throw StepUnderflow("step size underflow at t = " + std::to_string(t_));
        const double h = h_;

        for (std::size_t i = 0; i < n_; ++i) ytmp_[i] = y_[i] + h * a21 * k1_[i];
        eval_rhs(t_ + c2 * h, ytmp_, k2_);
        for (std::size_t i = 0; i < n_; ++i)
            ytmp_[i] = y_[i] + h * (a31 * k1_[i] + a32 * k2_[i]);
        eval_rhs(t_ + c3 * h, ytmp_, k3_);
        for (std::size_t i = 0; i < n_; ++i)
            ytmp_[i] = y_[i] + h * (a41 * k1_[i] + a42 * k2_[i] + a43 * k3_[i]);
        eval_rhs(t_ + c4 * h, ytmp_, k4_);
        for (std::size_t i = 0; i < n_; ++i)
            ytmp_[i] = y_[i] + h * (a51 * k1_[i] + a52 * k2_[i] + a53 * k3_[i] + a54 * k4_[i]);
        eval_rhs(t_ + c5 * h, ytmp_, k5_);
        for (std::size_t i = 0; i < n_; ++i)
            ytmp_[i] = y_[i] + h * (a61 * k1_[i] + a62 * k2_[i] + a63 * k3_[i] + a64 * k4_[i] +
                                    a65 * k5_[i]);
        eval_rhs(t_ + h, ytmp_, k6_);
        // 5th-order solution (also stage 7 node)
        std::vector<double>& y1 = k2_;  // reuse storage
        for (std::size_t i = 0; i < n_; ++i)
            y1[i] = y_[i] + h * (a71 * k1_[i] + a73 * k3_[i] + a74 * k4_[i] + a75 * k5_[i] +
                                 a76 * k6_[i]);
        eval_rhs(t_ + h, y1, k7_);

        double err = 0.0;
        for (std::size_t i = 0; i < n_; ++i) {
            const double ei = h * (e1 * k1_[i] + e3 * k3_[i] + e4 * k4_[i] + e5 * k5_[i] +
                                   e6 * k6_[i] + e7 * k7_[i]);
            const double sc =
                opt_.abs_tol + opt_.rel_tol * std::max(std::abs(y_[i]), std::abs(y1[i]));
            err += (ei / sc) * (ei / sc);
        }
        err = std::sqrt(err / n_);

        if (!std::isfinite(err) || !all_finite(y1)) {
            h_ *= 0.5;
            rejected = true;
            continue;
        }
        const double fac =
            std::clamp(0.9 * std::pow(std::max(err, 1e-32), -0.2), 0.2, rejected ? 1.0 : 10.0);
        if (err <= 1.0) {
            // accept: build the interpolant, then roll the state forward
            dense_.t0 = t_;
            dense_.h = h;
            for (std::size_t i = 0; i < n_; ++i) {
                const double ydiff = y1[i] - y_[i];
                const double bspl = h * k1_[i] - ydiff;
                dense_.r1[i] = y_[i];
                dense_.r2[i] = ydiff;
                dense_.r3[i] = bspl;
                dense_.r4[i] = ydiff - h * k7_[i] - bspl;
                dense_.r5[i] = h * (d1 * k1_[i] + d3 * k3_[i] + d4 * k4_[i] + d5 * k5_[i] +
                                    d6 * k6_[i] + d7 * k7_[i]);
            }
            t_ += h;
            y_ = y1;
            std::swap(k1_, k7_);  // FSAL
            ++n_accepted_;
            h_ = last ? h : h * fac;
            if (last) {
                t_ = t_end_;
                done_ = true;
            }
            return true;
        }
        h_ = h * fac;
        rejected = true;
    }
}

void DormandPrince5::extend(double t_end) {
    if ((t_end - t_end_) * dir_ <= 0) return;
    t_end_ = t_end;
    if (done_ && std::abs(t_ - t_end) > 0) done_ = false;
    if (h_ == 0.0) h_ = dir_ * 1e-6;
}

Trajectory integrate(const Rhs& rhs, std::span<const double> y0, double t0, double t_end,
                     const IvpOptions& opt) {
    Trajectory traj;
    traj.t0_ = t0;
    traj.t1_ = t_end;
    traj.dim_ = y0.size();
    DormandPrince5 stepper(rhs, y0, t0, t_end, opt);
    while (stepper.step()) traj.steps_.push_back(stepper.last_step());
    traj.yf_.assign(stepper.y().begin(), stepper.y().end());
    return traj;
}

void Trajectory::eval(double t, std::span<double> y) const {
    if (steps_.empty()) throw NumericalError("empty trajectory");
    const double dir = t1_ >= t0_ ? 1.0 : -1.0;
    const double tc = std::clamp(dir * t, std::min(dir * t0_, dir * t1_), std::max(dir * t0_, dir * t1_)) * dir;
    // binary search for the covering step
    std::size_t lo = 0, hi = steps_.size() - 1;
    while (lo < hi) {
        const std::size_t mid = (lo + hi) / 2;
        if (dir * (steps_[mid].t0 + steps_[mid].h) < dir * tc)
            lo = mid + 1;
        else
            hi = mid;
    }
    steps_[lo].eval(tc, y);
}

double Trajectory::eval(double t, std::size_t component) const {
    std::vector<double> tmp(dim_);
    eval(t, tmp);
    return tmp[component];
}

EventResult integrate_until_event(const Rhs& rhs, std::span<const double> y0, double t0,
                                  double t_max, const EventSpec& event, const IvpOptions& opt) {
    return integrate_until_event(rhs, y0, t0, t_max, event, nullptr, opt);
}

EventResult integrate_until_event(const Rhs& rhs, std::span<const double> y0, double t0,
                                  double t_max, const EventSpec& event,
                                  const std::function<bool(double, std::span<const double>)>& accept,
                                  const IvpOptions& opt) {
    DormandPrince5 stepper(rhs, y0, t0, t_max, opt);
    double g_prev = event.fn(t0, y0);
    bool prev_valid = g_prev != 0.0;  // a zero at t0 is not a crossing
    std::vector<double> ybuf(y0.size());
    while (stepper.step()) {
        const DenseStep& ds = stepper.last_step();
        const double t1 = stepper.t();
        const double g_now = event.fn(t1, stepper.y());
        if (!prev_valid && g_now != 0.0) {
            g_prev = g_now;
            prev_valid = true;
            continue;
        }
        const bool crossed =
            prev_valid && ((g_prev < 0 && g_now >= 0) || (g_prev > 0 && g_now <= 0));
        const bool dir_ok = event.direction == EventDirection::any ||
                            (event.direction == EventDirection::rising && g_prev < 0) ||
                            (event.direction == EventDirection::falling && g_prev > 0);
        if (crossed && dir_ok) {
            auto gt = [&](double t) {
                ds.eval(t, ybuf);
                return event.fn(t, ybuf);
            };
            double te = g_now == 0.0 ? t1 : find_root(gt, ds.t0, t1, event.refine_tol);
            ds.eval(te, ybuf);
            if (!accept || accept(te, ybuf)) return {te, ybuf};
        }
        g_prev = g_now;
        prev_valid = prev_valid || g_now != 0.0;
    }
    throw EventNotFound("no event crossing in [" + std::to_string(t0) + ", " +
                        std::to_string(t_max) + "]");
}

double find_root(const std::function<double(double)>& f, double a, double b, double xtol,
                 int max_iter) {
    double fa = f(a), fb = f(b);
    if (fa == 0.0) return a;
    if (fb == 0.0) return b;
    if (fa * fb > 0.0) throw NoBracketError("find_root: endpoints do not bracket a root");
    double c = a, fc = fa, d = b - a, e = d;
    for (int it = 0; it < max_iter; ++it) {
        if (std::abs(fc) < std::abs(fb)) {
            a = b; b = c; c = a;
            fa = fb; fb = fc; fc = fa;
        }
        const double tol = 2.0 * uround * std::abs(b) + 0.5 * xtol;
        const double m = 0.5 * (c - b);
        if (std::abs(m) <= tol || fb == 0.0) return b;
        if (std::abs(e) < tol || std::abs(fa) <= std::abs(fb)) {
            d = e = m;  // bisection
        } else {
            double p, q;
            const double s = fb / fa;
            if (a == c) {
                p = 2.0 * m * s;
                q = 1.0 - s;
            } else {
                const double qq = fa / fc, r = fb / fc;
                p = s * (2.0 * m * qq * (qq - r) - (b - a) * (r - 1.0));
                q = (qq - 1.0) * (r - 1.0) * (s - 1.0);
            }
            if (p > 0) q = -q;
            p = std::abs(p);
            if (2.0 * p < std::min(3.0 * m * q - std::abs(tol * q), std::abs(e * q))) {
                e = d;
                d = p / q;
            } else {
                d = e = m;
            }
        }
        a = b;
        fa = fb;
        b += std::abs(d) > tol ? d : (m > 0 ? tol : -tol);
        fb = f(b);
        if ((fb > 0) == (fc > 0)) {
            c = a;
            fc = fa;
            e = d = b - a;
        }
    }
    throw ConvergenceFailure("find_root: iteration limit reached");
}

double bisect_refine(const std::function<double(double)>& f, double a, double b, double ftol,
                     const std::function<double(double)>& df) {
    double fa = f(a), fb = f(b);
    if (std::abs(fa) <= ftol) return a;
    if (std::abs(fb) <= ftol) return b;
    if (fa * fb > 0.0) throw NoBracketError("bisect_refine: endpoints do not bracket a root");
    double mid = 0.5 * (a + b);
    for (int it = 0; it < 200; ++it) {
        mid = 0.5 * (a + b);
        const double fm = f(mid);
        if (std::abs(fm) <= ftol || 0.5 * (b - a) < uround * std::abs(mid)) break;
        if ((fm > 0) == (fa > 0)) {
            a = mid;
            fa = fm;
        } else {
            b = mid;
        }
    }
    if (df) {
        // one guarded Newton polish
        const double fm = f(mid);
        const double dm = df(mid);
        if (std::isfinite(dm) && dm != 0.0) {
            const double cand = mid - fm / dm;
            if (cand > a && cand < b && std::abs(f(cand)) <= std::abs(fm)) mid = cand;
        }
    }
    if (std::abs(f(mid)) > ftol)
        throw ConvergenceFailure("bisect_refine: root refinement stalled");
    return mid;
}

SymmetricMatrix::SymmetricMatrix(int order)
    : order_(order), data_(static_cast<std::size_t>(order) * order, 0.0) {
    if (order <= 0) throw NumericalError("matrix order must be positive");
}

void SymmetricMatrix::set(int i, int j, double v) {
    data_[static_cast<std::size_t>(i) * order_ + j] = v;
    data_[static_cast<std::size_t>(j) * order_ + i] = v;
}

void SymmetricMatrix::add(int i, int j, double v) {
    data_[static_cast<std::size_t>(i) * order_ + j] += v;
    if (i != j) data_[static_cast<std::size_t>(j) * order_ + i] += v;
}

double SymmetricMatrix::inf_norm() const {
    double best = 0.0;
    for (int i = 0; i < order_; ++i) {
        double s = 0.0;
        for (int j = 0; j < order_; ++j) s += std::abs((*this)(i, j));
        best = std::max(best, s);
    }
    return best;
}

void SymmetricMatrix::multiply(std::span<const double> x, std::span<double> y) const {
    for (int i = 0; i < order_; ++i) {
        double s = 0.0;
        const double* row = data_.data() + static_cast<std::size_t>(i) * order_;
        for (int j = 0; j < order_; ++j) s += row[j] * x[j];
        y[i] = s;
    }
}

EigenDecomposition eigen_sym(const SymmetricMatrix& m) {
    const int n = m.order();
    for (double v : m.data())
        if (!std::isfinite(v)) throw NumericalError("eigen_sym: non-finite matrix entry");
    Eigen::Map<const Eigen::MatrixXd> a(m.data().data(), n, n);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(a);
    if (solver.info() != Eigen::Success)
        throw NoConvergenceError("eigen_sym: eigensolver did not converge");
    EigenDecomposition out;
    out.order = n;
    out.values.assign(solver.eigenvalues().data(), solver.eigenvalues().data() + n);
    out.vectors.assign(solver.eigenvectors().data(),
                       solver.eigenvectors().data() + static_cast<std::size_t>(n) * n);
    return out;
}

double periodic_quadrature(std::span<const double> samples, double length) {
    double s = 0.0;
    for (double v : samples) s += v;
    return s * (length / static_cast<double>(samples.size()));
}

}  // namespace logkdv
