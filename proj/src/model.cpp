#include "tga/model.hpp"

#include "tga/errors.hpp"

#include <cmath>
#include <numbers>

namespace tga {

WaveguideParams::WaveguideParams(double omega_c, double xi) : omega_c_(omega_c), xi_(xi) {
    if (!std::isfinite(omega_c)) {
        throw InvalidParameter("WaveguideParams: omega_c must be finite");
    }
    if (!(xi > 0.0) || !std::isfinite(xi)) {
        throw InvalidParameter("WaveguideParams: xi must be positive and finite");
    }
}

std::string to_string(BoundaryKind kind) {
    switch (kind) {
        case BoundaryKind::Open: return "open";
        case BoundaryKind::Periodic: return "periodic";
        case BoundaryKind::Custom: return "custom";
    }
    return "unknown";
}

TgaParams::TgaParams(int n_cells, double omega_e, double t1, double t2, Boundary boundary)
    : n_cells_(n_cells), omega_e_(omega_e), t1_(t1), t2_(t2), boundary_(boundary) {
    if (n_cells < 1) {
        throw InvalidParameter("TgaParams: n_cells must be >= 1");
    }
    if (!std::isfinite(omega_e) || !std::isfinite(t1) || !std::isfinite(t2) ||
        !std::isfinite(boundary.custom_t3)) {
        throw InvalidParameter("TgaParams: parameters must be finite");
    }
}

double TgaParams::t3() const noexcept {
    switch (boundary_.kind) {
        case BoundaryKind::Open: return 0.0;
        case BoundaryKind::Periodic: return t2_;
        case BoundaryKind::Custom: return boundary_.custom_t3;
    }
    return 0.0;
}

TgaParams TgaParams::with_boundary(Boundary boundary) const {
    return TgaParams(n_cells_, omega_e_, t1_, t2_, boundary);
}

CouplingConfig::CouplingConfig(double J, CouplingMode mode) : J_(J), mode_(mode) {
    if (!(J >= 0.0) || !std::isfinite(J)) {
        throw InvalidParameter("CouplingConfig: J must be finite and >= 0");
    }
}

std::string to_string(const SiteLabel& label) {
    switch (label.kind) {
        case SiteKind::Crw: return "CRW(" + std::to_string(label.index) + ")";
        case SiteKind::TgaA: return "A(" + std::to_string(label.index) + ")";
        case SiteKind::TgaB: return "B(" + std::to_string(label.index) + ")";
        case SiteKind::Probe: return "Probe";
    }
    return "?";
}

Eigen::Index DenseHamiltonian::index_of(const SiteLabel& label) const {
    for (std::size_t i = 0; i < labels.size(); ++i) {
        if (labels[i] == label) {
            return static_cast<Eigen::Index>(i);
        }
    }
    throw InvalidParameter("DenseHamiltonian: no site " + to_string(label));
}

double DenseHamiltonian::hermiticity_defect() const {
    return (entries - entries.adjoint()).cwiseAbs().maxCoeff();
}

namespace {

// Fills the SSH block starting at matrix index `at`.
void fill_tga_block(const TgaParams& tga, Eigen::MatrixXcd& h, Eigen::Index at) {
    const int L = tga.n_cells();
    for (int s = 0; s < tga.n_sites(); ++s) {
        h(at + s, at + s) = tga.omega_e();
    }
    for (int l = 0; l < L; ++l) {
        const Eigen::Index a = at + 2 * l;
        h(a, a + 1) = h(a + 1, a) = tga.t1();
        if (l + 1 < L) {
            h(a + 1, a + 2) = h(a + 2, a + 1) = tga.t2();
        }
    }
    // For L = 1 the closing bond coincides with the intra-cell bond and adds to it.
    const Eigen::Index first = at;
    const Eigen::Index last = at + tga.n_sites() - 1;
    h(last, first) += tga.t3();
    h(first, last) += tga.t3();
}

void append_tga_labels(const TgaParams& tga, std::vector<SiteLabel>& labels) {
    for (int l = 1; l <= tga.n_cells(); ++l) {
        labels.push_back({SiteKind::TgaA, l});
        labels.push_back({SiteKind::TgaB, l});
    }
}

}  // namespace

DenseHamiltonian build_tga_hamiltonian(const TgaParams& tga) {
    DenseHamiltonian out;
    out.entries = Eigen::MatrixXcd::Zero(tga.n_sites(), tga.n_sites());
    fill_tga_block(tga, out.entries, 0);
    append_tga_labels(tga, out.labels);
    return out;
}

int min_truncation(const TgaParams& tga) { return tga.span() + 20; }

Eigen::Index crw_origin(const TgaParams& tga, int m_sites) {
    return (m_sites - tga.n_sites()) / 2;
}

DenseHamiltonian build_truncated_system(const SystemParams& sys, int m_sites) {
    const TgaParams& tga = sys.tga;
    if (m_sites < min_truncation(tga)) {
        throw InvalidParameter("build_truncated_system: m_sites = " + std::to_string(m_sites) +
                               " is below the minimum N + 20 = " +
                               std::to_string(min_truncation(tga)));
    }
    const Eigen::Index dim = m_sites + tga.n_sites();
    const Eigen::Index origin = crw_origin(tga, m_sites);
    const double wc = sys.waveguide.omega_c();
    const double xi = sys.waveguide.xi();

    DenseHamiltonian out;
    out.entries = Eigen::MatrixXcd::Zero(dim, dim);
    out.labels.reserve(static_cast<std::size_t>(dim));
    auto& h = out.entries;
    for (Eigen::Index j = 0; j < m_sites; ++j) {
        h(j, j) = wc;
        if (j + 1 < m_sites) {
            h(j, j + 1) = h(j + 1, j) = -xi;
        }
        out.labels.push_back({SiteKind::Crw, static_cast<int>(j - origin)});
    }
    fill_tga_block(tga, h, m_sites);
    append_tga_labels(tga, out.labels);

    const double J = sys.coupling.J();
    const Eigen::Index a1 = m_sites;
    h(origin, a1) = h(a1, origin) = J;
    if (sys.coupling.mode() == CouplingMode::TwoPoint) {
        const Eigen::Index bl = m_sites + tga.n_sites() - 1;
        const Eigen::Index right = origin + tga.span();
        h(right, bl) = h(bl, right) = J;
    }
    return out;
}

double dispersion(const WaveguideParams& waveguide, double k) {
    if (!(k > 0.0 && k < std::numbers::pi)) {
        throw OutOfBand("dispersion: k must lie in (0, pi)");
    }
    return waveguide.omega_c() - 2.0 * waveguide.xi() * std::cos(k);
}

bool in_band(const WaveguideParams& waveguide, double energy) {
    const double c = (waveguide.omega_c() - energy) / (2.0 * waveguide.xi());
    return std::abs(c) <= 1.0 - kBandEdgeMargin;
}

double inverse_dispersion(const WaveguideParams& waveguide, double energy) {
    if (!std::isfinite(energy) || !in_band(waveguide, energy)) {
        throw OutOfBand("inverse_dispersion: energy outside the propagating band");
    }
    return std::acos((waveguide.omega_c() - energy) / (2.0 * waveguide.xi()));
}

}  // namespace tga
