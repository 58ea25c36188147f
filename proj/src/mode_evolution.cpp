#include "shearlab/mode_evolution.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <mutex>
#include <numbers>

namespace shearlab {

namespace {
constexpr double kPi = std::numbers::pi;
std::mutex fftw_plan_mutex;  // FFTW planner is not thread-safe
}  // namespace

double ModeState::sup_abs() const {
    double m = 0.0;
    for (const auto& v : values) m = std::max(m, std::abs(v));
    return m;
}

double ModeState::max_imag_abs() const {
    double m = 0.0;
    for (const auto& v : values) m = std::max(m, std::abs(v.imag()));
    return m;
}

double ModeState::min_real() const {
    double m = values.empty() ? 0.0 : values.front().real();
    for (const auto& v : values) m = std::min(m, v.real());
    return m;
}

double ModeState::l2_xi() const {
    const double dxi = grid.dxi();
    double s = 0.0;
    for (int i = 0; i < grid.n; ++i) {
        const double w = (i == 0 || i == grid.n - 1) ? 0.5 : 1.0;
        s += w * std::norm(values[i]);
    }
    return std::sqrt(s * dxi);
}

const ModeState& Trajectory::at_time(double t, double tol) const {
    for (const auto& s : snapshots)
        if (std::abs(s.t - t) <= tol) return s;
    throw std::out_of_range("no snapshot at t = " + std::to_string(t));
}

double EvolutionConfig::max_dt(const ModelParams& p) {
    return std::min(0.2, 0.1 / (p.M * kPi * p.gamma + 1e-30));
}

double kernel_value(const ModelParams& p, double t, double xi, double eta, int k) {
    if (k == 0) throw std::invalid_argument("kernel_value: k must be nonzero");
    const double g2 = p.gamma * p.gamma;
    const double a = p.nu * t + 0.25 * g2;
    const double x = xi - eta;
    const double lor = (eta - k * t) * (eta - k * t) + double(k) * k;
    return p.M * g2 * x * std::exp(-a * x * x) * k / lor;
}

ModeState init_band(const FrequencyGrid& grid, double half_width) {
    if (half_width > grid.xi_max + 1e-12)
        throw grid_error("band half_width exceeds xi_max; enlarge the grid");
    ModeState s;
    s.k = 1;
    s.t = 0.0;
    s.grid = grid;
    s.values.assign(grid.n, cplx{0.0, 0.0});
    if (half_width > 0.0)
        for (int i = 0; i < grid.n; ++i)
            if (std::abs(grid.xi(i)) <= half_width) s.values[i] = 1.0;
    return s;
}

double default_band_halfwidth(const ModelParams& p) {
    return 2.0 * p.eps1 / p.gamma * std::log(1.0 / p.gamma);
}

cplx couette_exact_factor(const ModelParams& p, int k, double xi, double t) {
    const double kk = double(k) * k;
    const double ex = p.nu * (kk * t + xi * xi * t - k * xi * t * t + kk * t * t * t / 3.0);
    return cplx{std::exp(-ex), 0.0};
}

double ceiling_bound(const ModelParams& p, int k, double t) {
    const double kk = double(k) * k;
    return std::exp(-p.nu * kk * (t + t * t * t / 12.0)) *
           std::exp(p.M * kPi * p.gamma * t);
}

// ---------------------------------------------------------------------------
// FFT-accelerated trapezoid convolution on the uniform grid.
// out_i = dxi * [ sum_j g((i-j) dxi) w_j  - (g(xi_i - eta_0) w_0
//                                          + g(xi_i - eta_{n-1}) w_{n-1})/2 ]
// ---------------------------------------------------------------------------
class LinearConvolver {
  public:
    explicit LinearConvolver(int n) : n_(n) {
        nfft_ = 1;
        while (nfft_ < 2 * n_) nfft_ <<= 1;
        std::lock_guard<std::mutex> lock(fftw_plan_mutex);
        buf_a_ = fftw_alloc_complex(nfft_);
        buf_b_ = fftw_alloc_complex(nfft_);
        fwd_a_ = fftw_plan_dft_1d(nfft_, buf_a_, buf_a_, FFTW_FORWARD, FFTW_ESTIMATE);
        fwd_b_ = fftw_plan_dft_1d(nfft_, buf_b_, buf_b_, FFTW_FORWARD, FFTW_ESTIMATE);
        inv_b_ = fftw_plan_dft_1d(nfft_, buf_b_, buf_b_, FFTW_BACKWARD, FFTW_ESTIMATE);
    }
    ~LinearConvolver() {
        std::lock_guard<std::mutex> lock(fftw_plan_mutex);
        fftw_destroy_plan(fwd_a_);
        fftw_destroy_plan(fwd_b_);
        fftw_destroy_plan(inv_b_);
        fftw_free(buf_a_);
        fftw_free(buf_b_);
    }
    LinearConvolver(const LinearConvolver&) = delete;
    LinearConvolver& operator=(const LinearConvolver&) = delete;

    /// Load kernel samples g[p] = g((p - (n-1)) dxi), p = 0..2n-2, and FFT.
    void set_kernel(const std::vector<double>& g) {
        for (int p = 0; p < 2 * n_ - 1; ++p) {
            buf_a_[p][0] = g[p];
            buf_a_[p][1] = 0.0;
        }
        for (int p = 2 * n_ - 1; p < nfft_; ++p) buf_a_[p][0] = buf_a_[p][1] = 0.0;
        fftw_execute(fwd_a_);
        kernel_fft_.resize(nfft_);
        for (int p = 0; p < nfft_; ++p)
            kernel_fft_[p] = cplx{buf_a_[p][0], buf_a_[p][1]};
    }

    /// Full-sum convolution against the loaded kernel (no dxi, no end fix).
    void convolve(const std::vector<cplx>& w, std::vector<cplx>& out) {
        for (int j = 0; j < n_; ++j) {
            buf_b_[j][0] = w[j].real();
            buf_b_[j][1] = w[j].imag();
        }
        for (int j = n_; j < nfft_; ++j) buf_b_[j][0] = buf_b_[j][1] = 0.0;
        fftw_execute(fwd_b_);
        for (int p = 0; p < nfft_; ++p) {
            const cplx prod = cplx{buf_b_[p][0], buf_b_[p][1]} * kernel_fft_[p];
            buf_b_[p][0] = prod.real();
            buf_b_[p][1] = prod.imag();
        }
        fftw_execute(inv_b_);
        out.resize(n_);
        const double scale = 1.0 / nfft_;
        for (int i = 0; i < n_; ++i) {
            const int p = i + n_ - 1;
            out[i] = cplx{buf_b_[p][0] * scale, buf_b_[p][1] * scale};
        }
    }

  private:
    int n_, nfft_;
    fftw_complex* buf_a_;
    fftw_complex* buf_b_;
    fftw_plan fwd_a_, fwd_b_, inv_b_;
    std::vector<cplx> kernel_fft_;
};

// ---------------------------------------------------------------------------
// Stepper
// ---------------------------------------------------------------------------
struct ModeStepper::Impl {
    ModelParams p;
    EvolutionConfig cfg;
    int n;
    mutable std::unique_ptr<LinearConvolver> conv;
    mutable std::unique_ptr<LinearConvolver> conv_transport;
    mutable std::vector<double> gbuf;
    mutable std::vector<cplx> wbuf, cbuf, tbuf;
    mutable double kernel_a_loaded = -1.0;  // Gaussian width parameter in conv
    mutable bool transport_loaded = false;

    Impl(const ModelParams& p_, const EvolutionConfig& cfg_, int n_)
        : p(p_), cfg(cfg_), n(n_) {
        gbuf.resize(2 * n - 1);
        if (cfg.use_fft && cfg.variant != EvolutionVariant::CouetteExact) {
            conv = std::make_unique<LinearConvolver>(n);
            if (cfg.variant == EvolutionVariant::TransportViscous)
                conv_transport = std::make_unique<LinearConvolver>(n);
        }
    }

    double gauss_width(double t) const {
        const double g2 = p.gamma * p.gamma;
        if (cfg.variant == EvolutionVariant::ModifiedViscous)
            return p.nu * t + 0.25 * g2;
        return 0.25 * g2;  // inviscid and transport variants use the static bump
    }

    // nonlocal term kernel samples: g(x) = M g^2 x exp(-a x^2) * k
    void load_kernel(double a, int k, double dxi) const {
        if (kernel_a_loaded == a) return;
        const double g2 = p.gamma * p.gamma;
        for (int q = 0; q < 2 * n - 1; ++q) {
            const double x = (q - (n - 1)) * dxi;
            gbuf[q] = p.M * g2 * x * std::exp(-a * x * x) * k;
        }
        if (conv) {
            conv->set_kernel(gbuf);
            kernel_a_loaded = a;
        }
    }

    void load_transport_kernel(int k, double dxi) const {
        if (transport_loaded) return;
        transport_loaded = true;
        const double g2 = p.gamma * p.gamma;
        std::vector<double> gt(2 * n - 1);
        for (int q = 0; q < 2 * n - 1; ++q) {
            const double x = (q - (n - 1)) * dxi;
            gt[q] = (q == n - 1) ? 0.0 : -k * p.M * g2 * std::exp(-0.25 * g2 * x * x) / x;
        }
        conv_transport->set_kernel(gt);
    }

    // N(s, h) -> out (the full convolution terms at stage time s)
    void apply_N(double s, const ModeState& st, const std::vector<cplx>& h,
                 std::vector<cplx>& out) const {
        const double dxi = st.grid.dxi();
        const int k = st.k;
        out.assign(n, cplx{0.0, 0.0});
        if (p.M == 0.0 || cfg.variant == EvolutionVariant::CouetteExact) return;
        // w_j = k h_j / ((eta_j - k s)^2 + k^2), Lorentzian absorbed
        wbuf.resize(n);
        for (int j = 0; j < n; ++j) {
            const double eta = st.grid.xi(j);
            const double lor = (eta - k * s) * (eta - k * s) + double(k) * k;
            wbuf[j] = h[j] / lor;
        }
        const double a = gauss_width(s);
        const double g2 = p.gamma * p.gamma;
        if (conv) {
            load_kernel(a, k, dxi);
            conv->convolve(wbuf, cbuf);
        } else {
            cbuf.assign(n, cplx{0.0, 0.0});
            for (int i = 0; i < n; ++i) {
                cplx acc{0.0, 0.0};
                for (int j = 0; j < n; ++j) {
                    const double x = (i - j) * dxi;
                    acc += p.M * g2 * x * std::exp(-a * x * x) * double(k) * wbuf[j];
                }
                cbuf[i] = acc;
            }
        }
        // trapezoid end-point halves
        for (int i = 0; i < n; ++i) {
            const double x0 = (i - 0) * dxi;
            const double x1 = (i - (n - 1)) * dxi;
            const cplx endfix = 0.5 * (p.M * g2 * x0 * std::exp(-a * x0 * x0) * double(k) * wbuf[0] +
                                       p.M * g2 * x1 * std::exp(-a * x1 * x1) * double(k) * wbuf[n - 1]);
            out[i] = (cbuf[i] - endfix) * dxi;
        }
        if (cfg.variant == EvolutionVariant::TransportViscous) {
            // -k * PV int M g^2 exp(-g^2 (xi-eta)^2/4) h(eta)/(xi-eta) deta
            if (conv_transport) {
                load_transport_kernel(k, dxi);
                conv_transport->convolve(h, tbuf);
            } else {
                tbuf.assign(n, cplx{0.0, 0.0});
                for (int i = 0; i < n; ++i) {
                    cplx acc{0.0, 0.0};
                    for (int j = 0; j < n; ++j) {
                        if (i == j) continue;
                        const double x = (i - j) * dxi;
                        acc += -k * p.M * g2 * std::exp(-0.25 * g2 * x * x) / x * h[j];
                    }
                    tbuf[i] = acc;
                }
            }
            for (int i = 0; i < n; ++i) {
                const double x0 = i * dxi;
                const double x1 = (i - (n - 1)) * dxi;
                cplx endfix{0.0, 0.0};
                if (i != 0)
                    endfix += 0.5 * (-k * p.M * g2 * std::exp(-0.25 * g2 * x0 * x0) / x0) * h[0];
                if (i != n - 1)
                    endfix += 0.5 * (-k * p.M * g2 * std::exp(-0.25 * g2 * x1 * x1) / x1) * h[n - 1];
                out[i] += (tbuf[i] - endfix) * dxi;
            }
        }
    }

    // exact dissipation propagator P(s1,s2)(xi) = exp(-nu int_{s1}^{s2} k^2 + (xi - k s)^2 ds)
    double propagator(double s1, double s2, double xi, int k) const {
        if (p.nu == 0.0) return 1.0;
        const double kk = double(k) * k;
        const double d1 = xi - k * s1, d2 = xi - k * s2;
        const double ints = kk * (s2 - s1) + (d1 * d1 * d1 - d2 * d2 * d2) / (3.0 * k);
        return std::exp(-p.nu * ints);
    }
};

ModeStepper::ModeStepper(const ModelParams& p, const EvolutionConfig& cfg, int n_grid)
    : impl_(std::make_unique<Impl>(p, cfg, n_grid)) {}
ModeStepper::~ModeStepper() = default;

void ModeStepper::step(ModeState& st, double dt) const {
    const auto& im = *impl_;
    const int n = im.n;
    const int k = st.k;
    const double t = st.t;
    if (im.cfg.variant == EvolutionVariant::CouetteExact || im.p.M == 0.0) {
        for (int i = 0; i < n; ++i)
            st.values[i] *= im.propagator(t, t + dt, st.grid.xi(i), k);
        st.t = t + dt;
        return;
    }
    std::vector<cplx> k1(n), k2(n), k3(n), k4(n), v(n);
    std::vector<double> A(n), B(n);
    for (int i = 0; i < n; ++i) {
        const double xi = st.grid.xi(i);
        A[i] = im.propagator(t, t + 0.5 * dt, xi, k);
        B[i] = im.propagator(t + 0.5 * dt, t + dt, xi, k);
    }
    im.apply_N(t, st, st.values, k1);
    for (int i = 0; i < n; ++i) v[i] = A[i] * (st.values[i] + 0.5 * dt * k1[i]);
    im.apply_N(t + 0.5 * dt, st, v, k2);
    for (int i = 0; i < n; ++i) v[i] = A[i] * st.values[i] + 0.5 * dt * k2[i];
    im.apply_N(t + 0.5 * dt, st, v, k3);
    for (int i = 0; i < n; ++i) v[i] = A[i] * B[i] * st.values[i] + dt * B[i] * k3[i];
    im.apply_N(t + dt, st, v, k4);
    for (int i = 0; i < n; ++i) {
        st.values[i] = A[i] * B[i] * st.values[i] +
                       dt / 6.0 * (A[i] * B[i] * k1[i] + 2.0 * B[i] * (k2[i] + k3[i]) + k4[i]);
    }
    st.t = t + dt;
    if (!std::isfinite(st.values[n / 2].real()) || !std::isfinite(st.sup_abs()))
        throw integration_diverged(st.t);
}

Trajectory evolve(const ModeState& initial, const EvolutionConfig& cfg,
                  const ModelParams& params, double t_final) {
    initial.grid.check_spacing();
    initial.grid.check_covers(t_final, params.gamma);
    Trajectory traj;
    traj.params = params;
    traj.cfg = cfg;

    std::vector<double> marks{0.0, t_final};
    for (double s : cfg.snapshot_times)
        if (s > 0.0 && s < t_final) marks.push_back(s);
    std::sort(marks.begin(), marks.end());
    marks.erase(std::unique(marks.begin(), marks.end(),
                            [](double a, double b) { return std::abs(a - b) < 1e-12; }),
                marks.end());

    const double dt_max = std::min(cfg.dt, EvolutionConfig::max_dt(params));
    ModeStepper stepper(params, cfg, initial.grid.n);
    ModeState state = initial;
    const double sup0 = state.sup_abs();
    const double slack = 1.0 + 10.0 * initial.grid.dxi();

    auto snap_check = [&](const ModeState& s) {
        if (cfg.check_ceiling && sup0 > 0.0) {
            const double lim = ceiling_bound(params, s.k, s.t) * sup0 * slack;
            if (s.sup_abs() > lim)
                throw std::runtime_error("sup-norm ceiling violated at t = " +
                                         std::to_string(s.t));
        }
        traj.snapshots.push_back(s);
    };

    snap_check(state);
    traj.norm_history.emplace_back(0.0, state.l2_xi());
    for (std::size_t m = 0; m + 1 < marks.size(); ++m) {
        const double seg = marks[m + 1] - marks[m];
        const int nsteps = std::max(1, static_cast<int>(std::ceil(seg / dt_max - 1e-12)));
        const double dt = seg / nsteps;
        for (int s = 0; s < nsteps; ++s) {
            stepper.step(state, dt);
            traj.norm_history.emplace_back(state.t, state.l2_xi());
        }
        state.t = marks[m + 1];  // kill accumulated roundoff in t
        snap_check(state);
    }
    return traj;
}

TransportDecayReport transport_decay_check(const Trajectory& traj) {
    if (traj.cfg.variant != EvolutionVariant::TransportViscous)
        throw std::logic_error("transport_decay_check: needs the TransportViscous variant");
    const auto& p = traj.params;
    if (!(p.nu > 0.0))
        throw std::logic_error("transport_decay_check: needs nu > 0");
    const double T = traj.snapshots.back().t;
    if (T < 2.0 * std::pow(p.nu, -1.0 / 3.0))
        throw std::runtime_error("transport_decay_check: window too short; need T >= 2 nu^{-1/3}");
    const double n0 = traj.snapshots.front().l2_xi();
    double s33 = 0, s31 = 0, s11 = 0, r3 = 0, r1 = 0;
    int used = 0;
    for (const auto& s : traj.snapshots) {
        if (s.t < 0.5 * T || s.t <= 0.0) continue;
        const double y = std::log(s.l2_xi() / n0);
        const double t3 = -s.t * s.t * s.t, t1 = s.t;
        s33 += t3 * t3;
        s31 += t3 * t1;
        s11 += t1 * t1;
        r3 += t3 * y;
        r1 += t1 * y;
        ++used;
    }
    if (used < 3)
        throw std::runtime_error("transport_decay_check: too few snapshots in the late window");
    const double det = s33 * s11 - s31 * s31;
    TransportDecayReport rep;
    rep.a = (r3 * s11 - r1 * s31) / det;
    rep.b = (s33 * r1 - s31 * r3) / det;
    rep.window_lo = 0.5 * T;
    rep.window_hi = T;
    rep.a_positive = rep.a > 0.0;
    const int k = traj.snapshots.front().k;
    const double denom = p.M * (std::sqrt(p.gamma) + std::abs(k) * p.gamma * p.gamma);
    rep.C_b = (denom > 0.0) ? rep.b / denom : 0.0;
    return rep;
}

void export_snapshot_csv(const ModeState& s, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open " + path);
    out << "xi,re_h,im_h\n";
    out.precision(17);
    for (int i = 0; i < s.grid.n; ++i)
        out << s.grid.xi(i) << ',' << s.values[i].real() << ',' << s.values[i].imag() << '\n';
}

}  // namespace shearlab
