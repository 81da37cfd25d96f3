#include "tga/dynamics.hpp"

#include "tga/errors.hpp"

#include <Eigen/SparseCore>
#include <Eigen/SparseLU>

#include <cmath>
#include <sstream>

namespace tga {

DenseHamiltonian build_probe_system(const SystemParams& sys, const ProbeParams& probe, int m_sites) {
    if (!(probe.gamma >= 0.0) || !(probe.f >= 0.0) || !std::isfinite(probe.omega_p)) {
        throw InvalidParameter("ProbeParams: require gamma >= 0, f >= 0 and finite omega_p");
    }
    DenseHamiltonian base = build_truncated_system(sys, m_sites);
    const Eigen::Index origin = crw_origin(sys.tga, m_sites);
    const Eigen::Index site = origin + probe.attach_site;
    if (site < 0 || site >= m_sites) {
        throw InvalidParameter("ProbeParams: attach_site lies outside the truncated waveguide");
    }

    const Eigen::Index n = base.dim();
    DenseHamiltonian out;
    out.entries = Eigen::MatrixXcd::Zero(n + 1, n + 1);
    out.entries.topLeftCorner(n, n) = base.entries;
    out.entries(n, n) = cplx(probe.omega_p, -probe.gamma);
    out.entries(n, site) = out.entries(site, n) = probe.f;
    out.labels = std::move(base.labels);
    out.labels.push_back({SiteKind::Probe, 0});
    return out;
}

TimeSeries evolve_probe(const SystemParams& sys, const ProbeParams& probe, int m_sites,
                        const EvolveOptions& options) {
    const double dt = options.dt;
    const double stride = options.sample_stride;
    if (!(dt > 0.0) || !(options.t_max > 0.0) || !(stride >= dt)) {
        throw InvalidParameter("evolve_probe: need dt > 0, t_max > 0 and sample_stride >= dt");
    }
    const long steps_per_sample = std::lround(stride / dt);
    if (std::abs(steps_per_sample * dt - stride) > 1e-9 * stride) {
        throw InvalidParameter("evolve_probe: sample_stride must be an integer multiple of dt");
    }
    const long samples = static_cast<long>(std::floor(options.t_max / stride + 1e-9)) + 1;

    const DenseHamiltonian hp = build_probe_system(sys, probe, m_sites);
    const Eigen::Index n = hp.dim();
    const Eigen::Index p = n - 1;
    const cplx minus_i(0.0, -1.0);

    // A = -i (H_p - omega_c)
    Eigen::MatrixXcd shifted = hp.entries;
    shifted.diagonal().array() -= sys.waveguide.omega_c();
    const Eigen::SparseMatrix<cplx> A = (minus_i * shifted).sparseView();
    Eigen::SparseMatrix<cplx> I(n, n);
    I.setIdentity();
    const Eigen::SparseMatrix<cplx> A2 = A * A;

    // Two-stage Gauss-Legendre on a linear system is the (2,2) Pade propagator.
    const Eigen::SparseMatrix<cplx> lhs = I - (dt / 2.0) * A + (dt * dt / 12.0) * A2;
    const Eigen::SparseMatrix<cplx> rhs = I + (dt / 2.0) * A + (dt * dt / 12.0) * A2;
    Eigen::SparseLU<Eigen::SparseMatrix<cplx>> lu;
    lu.compute(lhs);
    if (lu.info() != Eigen::Success) {
        throw NumericalError("evolve_probe: factorization of the step operator failed");
    }

    Eigen::VectorXcd psi = Eigen::VectorXcd::Zero(n);
    psi(p) = 1.0;

    TimeSeries out;
    out.times.reserve(static_cast<std::size_t>(samples));
    out.p_e.reserve(static_cast<std::size_t>(samples));
    out.total_norm.reserve(static_cast<std::size_t>(samples));
    auto record = [&](long s) {
        out.times.push_back(s * stride);
        out.p_e.push_back(std::norm(psi(p)));
        out.total_norm.push_back(psi.squaredNorm());
    };
    record(0);
    Eigen::VectorXcd work(n);
    for (long s = 1; s < samples; ++s) {
        for (long i = 0; i < steps_per_sample; ++i) {
            work = rhs * psi;
            psi = lu.solve(work);
        }
        record(s);
    }

    if (probe.gamma == 0.0) {
        double drift = 0.0;
        for (const double v : out.total_norm) drift = std::max(drift, std::abs(v - 1.0));
        if (drift > 1e-8) {
            throw IntegratorToleranceExceeded("evolve_probe: norm drift " + std::to_string(drift) +
                                              " exceeds 1e-8");
        }
    }
    return out;
}

ExponentialFit fit_exponential(const TimeSeries& series) {
    if (series.times.size() < 3 || series.times.size() != series.p_e.size()) {
        throw InvalidParameter("fit_exponential: need at least three samples");
    }
    const double t0 = series.times.front();
    const double t1 = series.times.back();
    const double lo = t0 + 0.1 * (t1 - t0);
    const double hi = t0 + 0.9 * (t1 - t0);

    std::vector<double> ts;
    std::vector<double> ys;
    for (std::size_t i = 0; i < series.times.size(); ++i) {
        const double t = series.times[i];
        if (t < lo || t > hi) continue;
        if (!(series.p_e[i] > 0.0)) {
            throw NonPositiveData("fit_exponential: P_e must be positive over the fit window");
        }
        ts.push_back(t);
        ys.push_back(std::log(series.p_e[i]));
    }
    if (ts.size() < 2) {
        throw InvalidParameter("fit_exponential: fit window holds fewer than two samples");
    }
    const double n = static_cast<double>(ts.size());
    double mt = 0.0, my = 0.0;
    for (std::size_t i = 0; i < ts.size(); ++i) {
        mt += ts[i];
        my += ys[i];
    }
    mt /= n;
    my /= n;
    double sty = 0.0, stt = 0.0;
    for (std::size_t i = 0; i < ts.size(); ++i) {
        sty += (ts[i] - mt) * (ys[i] - my);
        stt += (ts[i] - mt) * (ts[i] - mt);
    }
    const double slope = sty / stt;
    ExponentialFit fit;
    fit.rate = -slope;
    fit.intercept = my - slope * mt;
    double ss = 0.0;
    for (std::size_t i = 0; i < ts.size(); ++i) {
        const double r = ys[i] - (fit.intercept + slope * ts[i]);
        ss += r * r;
    }
    fit.rms_residual = std::sqrt(ss / n);
    return fit;
}

std::optional<std::string> probe_detuning_warning(const SpectrumResult& spec,
                                                  const ProbeParams& probe) {
    std::ostringstream msg;
    bool any = false;
    for (const BoundState& b : spec.bound_states) {
        const double detuning = std::abs(probe.omega_p - b.energy);
        if (probe.f >= 0.1 * detuning) {
            msg << (any ? ", " : "probe near-resonant with bound state(s) at E = ") << b.energy;
            any = true;
        }
    }
    if (!any) return std::nullopt;
    return msg.str();
}

}  // namespace tga
