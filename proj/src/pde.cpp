#include "dnls/pde.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <mutex>
#include <numbers>
#include <string>
#include <vector>

#include <fftw3.h>
#include <boost/math/interpolators/cardinal_cubic_b_spline.hpp>

namespace dnls::pde {

namespace {

// FFTW planning is not thread-safe; executions on distinct plans are.
std::mutex& planner_mutex() {
    static std::mutex m;
    return m;
}

// Unnormalized forward/backward transforms on an owned aligned buffer.
class Fft {
public:
    explicit Fft(int n) : n_(n) {
        buf_ = static_cast<fftw_complex*>(
            fftw_malloc(sizeof(fftw_complex) * static_cast<size_t>(n)));
        if (!buf_) throw Error(ErrCode::numeric, "fftw_malloc failed");
        std::lock_guard<std::mutex> lock(planner_mutex());
        fwd_ = fftw_plan_dft_1d(n, buf_, buf_, FFTW_FORWARD, FFTW_MEASURE);
        bwd_ = fftw_plan_dft_1d(n, buf_, buf_, FFTW_BACKWARD, FFTW_MEASURE);
    }
    ~Fft() {
        std::lock_guard<std::mutex> lock(planner_mutex());
        fftw_destroy_plan(fwd_);
        fftw_destroy_plan(bwd_);
        fftw_free(buf_);
    }
    Fft(const Fft&) = delete;
    Fft& operator=(const Fft&) = delete;

    // physical -> spectral (unnormalized)
    void forward(const std::vector<cplx>& in, std::vector<cplx>& out) {
        run(fwd_, in, out);
    }
    // spectral -> physical (normalized by 1/n)
    void backward(const std::vector<cplx>& in, std::vector<cplx>& out) {
        run(bwd_, in, out);
        const double s = 1.0 / static_cast<double>(n_);
        for (auto& v : out) v *= s;
    }

private:
    void run(fftw_plan p, const std::vector<cplx>& in, std::vector<cplx>& out) {
        for (int j = 0; j < n_; ++j) {
            buf_[j][0] = in[static_cast<size_t>(j)].real();
            buf_[j][1] = in[static_cast<size_t>(j)].imag();
        }
        fftw_execute(p);
        out.resize(static_cast<size_t>(n_));
        for (int j = 0; j < n_; ++j)
            out[static_cast<size_t>(j)] = cplx(buf_[j][0], buf_[j][1]);
    }

    int n_;
    fftw_complex* buf_;
    fftw_plan fwd_, bwd_;
};

bool power_of_two(int n) { return n >= 8 && (n & (n - 1)) == 0; }

void validate_controls(const EvolveControls& c) {
    if (!power_of_two(c.n_fft))
        throw Error(ErrCode::invalid_argument, "n_fft must be a power of two >= 8");
    if (!(c.l_box > 0.0) || !(c.c_dt > 0.0) || !(c.dt_max > 0.0))
        throw Error(ErrCode::invalid_argument, "l_box, c_dt, dt_max must be positive");
}

std::vector<cplx> reflect_conj(const std::vector<cplx>& f) {
    const size_t n = f.size();
    std::vector<cplx> out(n);
    for (size_t j = 0; j < n; ++j) out[j] = std::conj(f[(n - j) % n]);
    return out;
}

// Integrating-factor RK4 stepper for i q_t + q_xx + i q^2 qbar_x
// + (1/2)|q|^4 q = 0, i.e. qhat' = -i k^2 qhat + Nhat(q).
class Evolver {
public:
    Evolver(std::vector<cplx> field0, const EvolveControls& c)
        : c_(c),
          n_(static_cast<size_t>(c.n_fft)),
          fft_(c.n_fft),
          k_(n_),
          mask_(n_) {
        if (field0.size() != n_)
            throw Error(ErrCode::invalid_argument,
                        "field size does not match n_fft");
        const double dk = 2.0 * std::numbers::pi / c_.l_box;
        for (size_t j = 0; j < n_; ++j) {
            const long long jj = static_cast<long long>(j);
            const long long half = static_cast<long long>(n_) / 2;
            const long long m = jj <= half ? jj : jj - static_cast<long long>(n_);
            k_[j] = (m == half) ? 0.0 : dk * static_cast<double>(m);  // zero Nyquist
            mask_[j] = std::llabs(m) <= static_cast<long long>(n_) / 3;
        }
        fft_.forward(field0, v_);
        for (size_t j = 0; j < n_; ++j)
            if (!mask_[j]) v_[j] = 0.0;
        mass0_ = mass();
    }

    // Parseval: sum_j |q_j|^2 dx = (L/n^2) sum_k |vhat_k|^2.
    double mass() const {
        double s = 0.0;
        for (const auto& v : v_) s += std::norm(v);
        return s * c_.l_box /
               (static_cast<double>(n_) * static_cast<double>(n_));
    }

    // Advance by elapsed >= 0 (the equation is autonomous).
    void advance(double elapsed) {
        double remaining = elapsed;
        while (remaining > 1e-14 * (1.0 + elapsed)) {
            const double want =
                std::min(c_.dt_max, c_.c_dt / std::max(sup_sq_estimate(), 1e-300));
            const double h = std::min(want, remaining);
            step(h);
            remaining -= h;
            elapsed_ += h;
            audit();
        }
    }

    std::vector<cplx> physical() {
        std::vector<cplx> q;
        fft_.backward(v_, q);
        return q;
    }

    double current_mass() const { return mass(); }
    double mass0() const { return mass0_; }

private:
    // ||q||_inf^2, refreshed by the nonlinear evaluations.
    double sup_sq_estimate() {
        if (sup_sq_ < 0.0) {
            auto q = physical();
            double m = 0.0;
            for (const auto& x : q) m = std::max(m, std::norm(x));
            sup_sq_ = m;
        }
        return sup_sq_;
    }

    // Nhat(vhat): q = ifft(vhat), N = -q^2 conj(q_x) + (i/2)|q|^4 q,
    // dealiased. Also records sup|q|^2 and the boundary amplitude.
    void nonlinear(const std::vector<cplx>& vhat, std::vector<cplx>& out,
                   bool record) {
        fft_.backward(vhat, q_);
        tmp_.resize(n_);
        for (size_t j = 0; j < n_; ++j) tmp_[j] = cplx(0.0, k_[j]) * vhat[j];
        fft_.backward(tmp_, qx_);
        if (record) {
            double m = 0.0;
            for (const auto& x : q_) m = std::max(m, std::norm(x));
            sup_sq_ = m;
            boundary_ = std::max(std::abs(q_[0]), std::abs(q_[n_ - 1]));
        }
        for (size_t j = 0; j < n_; ++j) {
            const cplx q = q_[j];
            const double a2 = std::norm(q);
            q_[j] = -q * q * std::conj(qx_[j]) + cplx(0.0, 0.5) * a2 * a2 * q;
        }
        fft_.forward(q_, out);
        for (size_t j = 0; j < n_; ++j)
            if (!mask_[j]) out[j] = 0.0;
    }

    void refresh_tables(double h) {
        if (h == h_tab_) return;
        e_.resize(n_);
        e2_.resize(n_);
        for (size_t j = 0; j < n_; ++j) {
            e_[j] = std::polar(1.0, -k_[j] * k_[j] * h * 0.5);
            e2_[j] = e_[j] * e_[j];
        }
        h_tab_ = h;
    }

    void step(double h) {
        refresh_tables(h);
        nonlinear(v_, k1_, /*record=*/true);
        if (boundary_ > c_.wrap_tol)
            throw Error(ErrCode::domain,
                        "box too small: boundary amplitude " +
                            std::to_string(boundary_) + " exceeds wrap_tol");
        a_.resize(n_);
        for (size_t j = 0; j < n_; ++j) a_[j] = e_[j] * (v_[j] + 0.5 * h * k1_[j]);
        nonlinear(a_, k2_, false);
        for (size_t j = 0; j < n_; ++j) a_[j] = e_[j] * v_[j] + 0.5 * h * k2_[j];
        nonlinear(a_, k3_, false);
        for (size_t j = 0; j < n_; ++j)
            a_[j] = e2_[j] * v_[j] + h * e_[j] * k3_[j];
        nonlinear(a_, k4_, false);
        for (size_t j = 0; j < n_; ++j) {
            v_[j] = e2_[j] * v_[j] +
                    (h / 6.0) * (e2_[j] * k1_[j] + 2.0 * e_[j] * (k2_[j] + k3_[j]) +
                                 k4_[j]);
        }
    }

    void audit() const {
        if (mass0_ <= 0.0) return;
        const double drift = std::abs(mass() - mass0_) / mass0_;
        if (drift > c_.mass_tol * std::max(1.0, elapsed_))
            throw Error(ErrCode::numeric,
                        "instability: relative mass drift " +
                            std::to_string(drift) + " after elapsed time " +
                            std::to_string(elapsed_));
    }

    EvolveControls c_;
    size_t n_;
    Fft fft_;
    std::vector<double> k_;
    std::vector<char> mask_;
    std::vector<cplx> v_, q_, qx_, tmp_, a_, k1_, k2_, k3_, k4_, e_, e2_;
    double h_tab_ = -1.0;
    double sup_sq_ = -1.0;
    double boundary_ = 0.0;
    double mass0_ = 0.0;
    double elapsed_ = 0.0;
};

std::vector<cplx> embed(const scattering::Potential& q0,
                        const EvolveControls& c) {
    if (q0.n < 5)
        throw Error(ErrCode::invalid_argument, "need >= 5 potential samples");
    if (q0.x_min < -0.5 * c.l_box || q0.x_max > 0.5 * c.l_box)
        throw Error(ErrCode::invalid_argument,
                    "potential window extends outside the periodic box");
    using Spline = boost::math::interpolators::cardinal_cubic_b_spline<double>;
    const size_t m = q0.samples.size();
    std::vector<double> re(m), im(m);
    for (size_t i = 0; i < m; ++i) {
        re[i] = q0.samples[i].real();
        im[i] = q0.samples[i].imag();
    }
    const double h = (q0.x_max - q0.x_min) / static_cast<double>(q0.n - 1);
    Spline sr(re.data(), m, q0.x_min, h);
    Spline si(im.data(), m, q0.x_min, h);
    const size_t n = static_cast<size_t>(c.n_fft);
    const double dx = c.l_box / static_cast<double>(n);
    std::vector<cplx> f(n, cplx(0.0));
    for (size_t j = 0; j < n; ++j) {
        const double x = -0.5 * c.l_box + dx * static_cast<double>(j);
        if (x >= q0.x_min && x <= q0.x_max) f[j] = cplx(sr(x), si(x));
    }
    return f;
}

scattering::Potential reflect_conj(const scattering::Potential& q0) {
    std::vector<cplx> s(q0.samples.size());
    for (size_t i = 0; i < s.size(); ++i)
        s[i] = std::conj(q0.samples[s.size() - 1 - i]);
    return scattering::Potential::create(std::move(s), -q0.x_max, -q0.x_min,
                                         q0.tail_tol);
}

FieldState make_state(std::vector<cplx> field, double time, double mass,
                      double mass0, double l_box) {
    FieldState s;
    s.field = std::move(field);
    s.time = time;
    s.mass = mass;
    s.mass0 = mass0;
    s.l_box = l_box;
    return s;
}

// Forward-only multi-snapshot run from a physical field at elapsed time 0.
std::vector<FieldState> run_forward(std::vector<cplx> field0,
                                    const std::vector<double>& elapsed,
                                    const EvolveControls& c) {
    Evolver ev(std::move(field0), c);
    std::vector<FieldState> out;
    double at = 0.0;
    for (double target : elapsed) {
        ev.advance(target - at);
        at = target;
        out.push_back(make_state(ev.physical(), target, ev.current_mass(),
                                 ev.mass0(), c.l_box));
    }
    return out;
}

// Cumulative phase c(x_j) = int_{-L/2}^{x_j} |f|^2 dy: linear ramp of the
// mean plus the spectral antiderivative of the mean-free part.
std::vector<double> cumulative_mass_phase(const FieldState& s) {
    const size_t n = s.field.size();
    if (!power_of_two(static_cast<int>(n)) || !(s.l_box > 0.0))
        throw Error(ErrCode::invalid_argument, "malformed field state");
    std::vector<cplx> m(n);
    for (size_t j = 0; j < n; ++j) m[j] = std::norm(s.field[j]);
    Fft fft(static_cast<int>(n));
    std::vector<cplx> mhat;
    fft.forward(m, mhat);
    const double mean = mhat[0].real() / static_cast<double>(n);
    const double dk = 2.0 * std::numbers::pi / s.l_box;
    std::vector<cplx> ahat(n, cplx(0.0));
    for (size_t j = 1; j < n; ++j) {
        const long long jj = static_cast<long long>(j);
        const long long half = static_cast<long long>(n) / 2;
        const long long mm = jj <= half ? jj : jj - static_cast<long long>(n);
        if (mm == half) continue;  // Nyquist
        ahat[j] = mhat[j] / cplx(0.0, dk * static_cast<double>(mm));
    }
    std::vector<cplx> anti;
    fft.backward(ahat, anti);
    std::vector<double> c(n);
    for (size_t j = 0; j < n; ++j) {
        c[j] = mean * (s.x(j) + 0.5 * s.l_box) + anti[j].real() -
               anti[0].real();
    }
    return c;
}

FieldState gauge_apply(const FieldState& s, double sign) {
    const std::vector<double> c = cumulative_mass_phase(s);
    FieldState out = s;
    for (size_t j = 0; j < s.field.size(); ++j)
        out.field[j] = s.field[j] * std::polar(1.0, sign * c[j]);
    return out;
}

}  // namespace

FieldState evolve_gi(const scattering::Potential& q0, double T,
                     const EvolveControls& c) {
    validate_controls(c);
    if (T >= 0.0) return run_forward(embed(q0, c), {T}, c).back();
    FieldState p = run_forward(embed(reflect_conj(q0), c), {-T}, c).back();
    return make_state(reflect_conj(p.field), T, p.mass, p.mass0, c.l_box);
}

FieldState evolve_gi(const FieldState& from, double t_target,
                     const EvolveControls& c) {
    validate_controls(c);
    if (from.field.size() != static_cast<size_t>(c.n_fft) ||
        from.l_box != c.l_box)
        throw Error(ErrCode::invalid_argument,
                    "state grid does not match the controls");
    const double delta = t_target - from.time;
    if (delta >= 0.0) {
        FieldState s = run_forward(from.field, {delta}, c).back();
        s.time = t_target;
        s.mass0 = from.mass0 > 0.0 ? from.mass0 : s.mass0;
        return s;
    }
    // q(x,t) -> conj(q(-x,-t)) solves the equation; run that one forward.
    FieldState p = run_forward(reflect_conj(from.field), {-delta}, c).back();
    return make_state(reflect_conj(p.field), t_target, p.mass,
                      from.mass0 > 0.0 ? from.mass0 : p.mass0, c.l_box);
}

std::vector<FieldState> evolve_gi_snapshots(const scattering::Potential& q0,
                                            const std::vector<double>& times,
                                            const EvolveControls& c) {
    validate_controls(c);
    if (times.empty())
        throw Error(ErrCode::invalid_argument, "no snapshot times");
    bool nonneg = times.back() >= 0.0;
    std::vector<double> elapsed;
    double prev = -1.0;
    for (double t : times) {
        if ((t > 0.0) != nonneg && t != 0.0)
            throw Error(ErrCode::invalid_argument,
                        "snapshot times must share one sign");
        const double e = std::abs(t);
        if (e <= prev)
            throw Error(ErrCode::invalid_argument,
                        "snapshot times must have strictly increasing magnitude");
        prev = e;
        elapsed.push_back(e);
    }
    if (nonneg) return run_forward(embed(q0, c), elapsed, c);
    auto states = run_forward(embed(reflect_conj(q0), c), elapsed, c);
    for (size_t i = 0; i < states.size(); ++i) {
        states[i].field = reflect_conj(states[i].field);
        states[i].time = times[i];
    }
    return states;
}

FieldState gauge_forward(const FieldState& u) { return gauge_apply(u, -1.0); }
FieldState gauge_inverse(const FieldState& q) { return gauge_apply(q, +1.0); }

std::vector<RaySample> ray_probe(const std::vector<FieldState>& states,
                                 double xi) {
    using Spline = boost::math::interpolators::cardinal_cubic_b_spline<double>;
    std::vector<RaySample> out;
    out.reserve(states.size());
    for (const auto& s : states) {
        const size_t n = s.field.size();
        if (n < 8) throw Error(ErrCode::invalid_argument, "field too small");
        const double x = -4.0 * xi * s.time;
        if (std::abs(x) > 0.5 * s.l_box - 2.0 * s.dx())
            throw Error(ErrCode::range,
                        "ray exits box: |x| = " + std::to_string(std::abs(x)));
        std::vector<double> re(n), im(n);
        for (size_t j = 0; j < n; ++j) {
            re[j] = s.field[j].real();
            im[j] = s.field[j].imag();
        }
        Spline sr(re.data(), n, s.x(0), s.dx());
        Spline si(im.data(), n, s.x(0), s.dx());
        out.push_back({s.time, cplx(sr(x), si(x))});
    }
    return out;
}

}  // namespace dnls::pde
