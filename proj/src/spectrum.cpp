#include "tga/spectrum.hpp"

#include "tga/errors.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>

namespace tga {

std::string to_string(BandSide side) {
    return side == BandSide::AboveBand ? "above" : "below";
}

double participation_ratio(const Eigen::Ref<const Eigen::VectorXd>& v) {
    const double n2 = v.squaredNorm();
    const double n4 = v.array().square().square().sum();
    return n2 * n2 / n4;
}

int min_diagonalization_sites(const TgaParams& tga) {
    return std::max(400, 10 * tga.span());
}

namespace {

// Reorders columns inside clusters of (numerically) equal eigenvalues.
void order_degenerate_clusters(Eigen::VectorXd& values, Eigen::MatrixXd& vectors, double tol) {
    const Eigen::Index n = values.size();
    Eigen::Index start = 0;
    while (start < n) {
        Eigen::Index end = start + 1;
        while (end < n && values(end) - values(end - 1) < tol) ++end;
        if (end - start > 1) {
            std::vector<Eigen::Index> idx(static_cast<std::size_t>(end - start));
            std::iota(idx.begin(), idx.end(), start);
            std::stable_sort(idx.begin(), idx.end(), [&](Eigen::Index a, Eigen::Index b) {
                return participation_ratio(vectors.col(a)) < participation_ratio(vectors.col(b));
            });
            const Eigen::MatrixXd block = vectors.middleCols(start, end - start);
            const Eigen::VectorXd vals = values.segment(start, end - start);
            for (Eigen::Index i = 0; i < end - start; ++i) {
                vectors.col(start + i) = block.col(idx[static_cast<std::size_t>(i)] - start);
                values(start + i) = vals(idx[static_cast<std::size_t>(i)] - start);
            }
        }
        start = end;
    }
}

struct TailFit {
    double length = std::numeric_limits<double>::quiet_NaN();
    double residual = std::numeric_limits<double>::quiet_NaN();
};

// Fits |psi| ~ exp(-d / length) on the waveguide, d measured outward from the
// nearest coupling site, both sides combined in quadrature.
TailFit fit_tail(const SpectrumResult& spec, Eigen::Index col) {
    const auto& v = spec.eigenvectors.col(col);
    const Eigen::Index origin = crw_origin(spec.params.tga, spec.m_sites);
    const int right_end =
        spec.params.coupling.mode() == CouplingMode::TwoPoint ? spec.params.tga.span() : 0;
    const Eigen::Index left_room = origin;
    const Eigen::Index right_room = spec.m_sites - 1 - (origin + right_end);
    const int d_first = 5;
    const int d_last = static_cast<int>(std::min<Eigen::Index>(30, std::min(left_room, right_room) - 5));
    const double floor = 1e-10 * v.cwiseAbs().maxCoeff();

    std::vector<double> ds;
    std::vector<double> logs;
    for (int d = d_first; d <= d_last; ++d) {
        const double a = std::hypot(v(origin - d), v(origin + right_end + d));
        if (a < floor) break;
        ds.push_back(d);
        logs.push_back(std::log(a));
    }
    TailFit fit;
    if (ds.size() < 3) return fit;

    const double n = static_cast<double>(ds.size());
    const double mean_d = std::accumulate(ds.begin(), ds.end(), 0.0) / n;
    const double mean_l = std::accumulate(logs.begin(), logs.end(), 0.0) / n;
    double sxy = 0.0;
    double sxx = 0.0;
    for (std::size_t i = 0; i < ds.size(); ++i) {
        sxy += (ds[i] - mean_d) * (logs[i] - mean_l);
        sxx += (ds[i] - mean_d) * (ds[i] - mean_d);
    }
    const double slope = sxy / sxx;
    const double intercept = mean_l - slope * mean_d;
    double worst = 0.0;
    for (std::size_t i = 0; i < ds.size(); ++i) {
        worst = std::max(worst, std::abs(logs[i] - (intercept + slope * ds[i])));
    }
    const double span = std::abs(logs.front() - logs.back());
    fit.length = slope < 0.0 ? -1.0 / slope : std::numeric_limits<double>::infinity();
    fit.residual = span > 0.0 ? worst / span : std::numeric_limits<double>::infinity();
    return fit;
}

}  // namespace

SpectrumResult diagonalize(const SystemParams& sys, int m_sites) {
    if (m_sites < min_diagonalization_sites(sys.tga)) {
        throw InvalidParameter("diagonalize: m_sites must be >= max(400, 10 N) = " +
                               std::to_string(min_diagonalization_sites(sys.tga)));
    }
    const DenseHamiltonian h = build_truncated_system(sys, m_sites);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(h.entries.real());
    if (eig.info() != Eigen::Success) {
        throw NumericalError("diagonalize: eigendecomposition failed");
    }

    SpectrumResult out{eig.eigenvalues(),
                       eig.eigenvectors(),
                       sys.waveguide.band_min(),
                       sys.waveguide.band_max(),
                       {},
                       sys,
                       m_sites,
                       h.labels};
    order_degenerate_clusters(out.eigenvalues, out.eigenvectors, 1e-10 * sys.waveguide.xi());
    out.bound_states = find_bound_states(out);
    return out;
}

std::vector<BoundState> find_bound_states(const SpectrumResult& spec) {
    std::vector<BoundState> out;
    const double xi = spec.params.waveguide.xi();
    const double wc = spec.params.waveguide.omega_c();
    const double dim = static_cast<double>(spec.eigenvalues.size());
    for (Eigen::Index i = 0; i < spec.eigenvalues.size(); ++i) {
        const double e = spec.eigenvalues(i);
        if (std::abs(e - wc) <= 2.0 * xi + kBoundGapThreshold * xi) continue;
        const double pr = participation_ratio(spec.eigenvectors.col(i));
        if (pr >= kBoundMaxParticipation * dim) continue;
        const TailFit fit = fit_tail(spec, i);
        out.push_back({e, fit.length, fit.residual, pr,
                       e > wc ? BandSide::AboveBand : BandSide::BelowBand, i});
    }
    return out;
}

WindingResult winding_number(double t1, double t2, int k_points) {
    if (k_points < 1024) {
        throw InvalidParameter("winding_number: k_points must be >= 1024");
    }
    if (std::abs(std::abs(t1) - std::abs(t2)) <= 1e-12) {
        throw GapClosed("winding_number: |t1| = |t2|, the bulk gap is closed");
    }
    auto h = [&](int m) {
        const double k = 2.0 * std::numbers::pi * m / k_points;
        return t1 + t2 * std::polar(1.0, -k);
    };
    double total = 0.0;
    double min_abs = std::numeric_limits<double>::infinity();
    cplx prev = h(0);
    for (int m = 1; m <= k_points; ++m) {
        const cplx cur = h(m % k_points);
        total += std::arg(cur / prev);  // wrapped to (-pi, pi]
        min_abs = std::min(min_abs, std::abs(cur));
        prev = cur;
    }
    // e^{-ik} runs clockwise; count encirclements in that sense.
    const int winding = -static_cast<int>(std::lround(total / (2.0 * std::numbers::pi)));
    return {winding, min_abs};
}

double edge_state_tolerance(const TgaParams& tga) {
    const double a1 = std::abs(tga.t1());
    const double a2 = std::abs(tga.t2());
    const double ratio = a2 > 0.0 ? a1 / a2 : std::numeric_limits<double>::infinity();
    double tol = 5.0 * std::pow(ratio, tga.n_cells()) * std::max(a1, a2) + 1e-10;
    // Never reach the bulk bands, which start at ||t1| - |t2|| from omega_e.
    tol = std::min(tol, 0.5 * std::abs(a1 - a2) + 1e-10);
    return tol;
}

bool edge_state_check(const TgaParams& tga) {
    if (tga.boundary().kind != BoundaryKind::Open) {
        throw InvalidParameter("edge_state_check: requires an open chain");
    }
    const DenseHamiltonian h = build_tga_hamiltonian(tga);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(h.entries.real());
    const double tol = edge_state_tolerance(tga);
    const double max_pr = 0.3 * tga.n_sites();
    for (Eigen::Index i = 0; i < eig.eigenvalues().size(); ++i) {
        if (std::abs(eig.eigenvalues()(i) - tga.omega_e()) >= tol) continue;
        if (participation_ratio(eig.eigenvectors().col(i)) < max_pr) return true;
    }
    return false;
}

}  // namespace tga
