#include "tga/scattering.hpp"

#include "tga/errors.hpp"

#include <Eigen/LU>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

namespace tga {

namespace {

using RowVec = Eigen::RowVectorXcd;

// Affine form  c + w . x  over the unknown vector x.
struct Affine {
    cplx c;
    RowVec w;
};

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

void require_scattering_k(double k) {
    if (!(k > 0.0 && k < std::numbers::pi) || std::abs(std::cos(k)) > 1.0 - kBandEdgeMargin) {
        throw OutOfBand("scattering: k must lie in (0, pi) away from the band edges");
    }
}

void require_open(const TgaParams& tga, const char* who) {
    if (tga.boundary().kind != BoundaryKind::Open) {
        throw InvalidParameter(std::string(who) + ": scattering requires an open chain (t3 = 0)");
    }
}

cplx phase(double k, double j) { return std::polar(1.0, k * j); }

// Builds and solves  M x = b  where each row is an Affine form that must vanish.
Eigen::VectorXcd solve_rows(const std::vector<Affine>& rows, Eigen::Index n) {
    Eigen::MatrixXcd M(n, n);
    Eigen::VectorXcd b(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        M.row(i) = rows[static_cast<std::size_t>(i)].w;
        b(i) = -rows[static_cast<std::size_t>(i)].c;
    }
    Eigen::FullPivLU<Eigen::MatrixXcd> lu(M);
    if (lu.rank() < n) {
        throw SingularSystem("scattering: linear system is rank deficient at this k");
    }
    return lu.solve(b);
}

// Index layout of the unknown vector for the two-point problem.
struct TwoPointLayout {
    static constexpr Eigen::Index r = 0, t = 1, A = 2, B = 3;
    static Eigen::Index X(int l) { return 4 + 2 * (l - 1); }  // l is 1-based
    static Eigen::Index Y(int l) { return 5 + 2 * (l - 1); }
};

}  // namespace

ScatteringSolution solve_scattering(const SystemParams& sys, double k, Incidence incidence) {
    require_scattering_k(k);
    require_open(sys.tga, "solve_scattering");
    if (sys.coupling.mode() != CouplingMode::TwoPoint) {
        throw InvalidParameter("solve_scattering: requires two-point coupling");
    }

    using Ix = TwoPointLayout;
    const int L = sys.tga.n_cells();
    const int N = sys.tga.span();
    const Eigen::Index n = 4 + 2 * L;
    const double wc = sys.waveguide.omega_c();
    const double xi = sys.waveguide.xi();
    const double we = sys.tga.omega_e();
    const double t1 = sys.tga.t1();
    const double t2 = sys.tga.t2();
    const double J = sys.coupling.J();
    const double E = dispersion(sys.waveguide, k);
    const bool from_left = incidence == Incidence::Left;

    auto zero = [n] { return Affine{0.0, RowVec::Zero(n)}; };
    auto unknown = [&](Eigen::Index idx) {
        Affine a = zero();
        a.w(idx) = 1.0;
        return a;
    };
    // Waveguide amplitude U_j from the piece that owns j (or the named piece).
    auto left_form = [&](int j) {
        Affine a = zero();
        if (from_left) {
            a.c = phase(k, j);
            a.w(Ix::r) = phase(-k, j);
        } else {
            a.w(Ix::t) = phase(-k, j);
        }
        return a;
    };
    auto inner_form = [&](int j) {
        Affine a = zero();
        a.w(Ix::A) = phase(k, j);
        a.w(Ix::B) = phase(-k, j);
        return a;
    };
    auto right_form = [&](int j) {
        Affine a = zero();
        if (from_left) {
            a.w(Ix::t) = phase(k, j);
        } else {
            a.c = phase(-k, j);
            a.w(Ix::r) = phase(k, j);
        }
        return a;
    };
    auto field = [&](int j) {
        if (j < 0) return left_form(j);
        if (j > N) return right_form(j);
        return inner_form(j);
    };
    auto combine = [&](std::initializer_list<std::pair<cplx, Affine>> terms) {
        Affine out = zero();
        for (const auto& [coef, a] : terms) {
            out.c += coef * a.c;
            out.w += coef * a.w;
        }
        return out;
    };

    // Schrodinger equation at CRW site j:  (E - wc) U_j + xi (U_{j-1} + U_{j+1}) - J (TGA) = 0.
    auto crw_equation = [&](int j) {
        Affine eq = combine({{E - wc, field(j)}, {xi, field(j - 1)}, {xi, field(j + 1)}});
        if (j == 0) eq.w(Ix::X(1)) -= J;
        if (j == N) eq.w(Ix::Y(L)) -= J;
        return eq;
    };
    // (E - we) X_l - t1 Y_l - t2 Y_{l-1} - J U_0 [l = 1] = 0 and the B counterpart.
    auto chain_equations = [&]() {
        std::vector<Affine> eqs;
        for (int l = 1; l <= L; ++l) {
            Affine ea = combine({{E - we, unknown(Ix::X(l))}, {-t1, unknown(Ix::Y(l))}});
            if (l > 1) ea.w(Ix::Y(l - 1)) -= t2;
            if (l == 1) ea = combine({{1.0, ea}, {-J, inner_form(0)}});
            eqs.push_back(ea);

            Affine eb = combine({{E - we, unknown(Ix::Y(l))}, {-t1, unknown(Ix::X(l))}});
            if (l < L) eb.w(Ix::X(l + 1)) -= t2;
            if (l == L) eb = combine({{1.0, eb}, {-J, inner_form(N)}});
            eqs.push_back(eb);
        }
        return eqs;
    };

    std::vector<Affine> rows;
    rows.push_back(combine({{1.0, left_form(0)}, {-1.0, inner_form(0)}}));
    rows.push_back(combine({{1.0, inner_form(N)}, {-1.0, right_form(N)}}));
    rows.push_back(crw_equation(0));
    rows.push_back(crw_equation(N));
    const auto chain = chain_equations();
    rows.insert(rows.end(), chain.begin(), chain.end());

    const Eigen::VectorXcd x = solve_rows(rows, n);

    auto eval = [&](const Affine& a) { return a.c + (a.w * x)(0); };
    double residual = 0.0;
    for (int j = -3; j <= N + 3; ++j) {
        residual = std::max(residual, std::abs(eval(crw_equation(j))));
    }
    for (const auto& eq : chain) {
        residual = std::max(residual, std::abs(eval(eq)));
    }
    residual = std::max(residual, std::abs(eval(rows[0])));
    residual = std::max(residual, std::abs(eval(rows[1])));

    ScatteringSolution sol;
    sol.k = k;
    sol.energy = E;
    sol.r = x(Ix::r);
    sol.t = x(Ix::t);
    sol.A = x(Ix::A);
    sol.B = x(Ix::B);
    sol.tga_amplitudes.assign(x.data() + 4, x.data() + n);
    sol.residual = residual;
    return sol;
}

cplx reflection_n1_analytic(const SystemParams& sys, double k) {
    if (sys.tga.n_cells() != 1) {
        throw InvalidParameter("reflection_n1_analytic: requires a single cell (N = 1)");
    }
    require_open(sys.tga, "reflection_n1_analytic");
    if (sys.coupling.mode() != CouplingMode::TwoPoint) {
        throw InvalidParameter("reflection_n1_analytic: requires two-point coupling");
    }
    require_scattering_k(k);

    const double xi = sys.waveguide.xi();
    const double t1 = sys.tga.t1();
    const double J = sys.coupling.J();
    const double E = dispersion(sys.waveguide, k);
    const double d1 = E - sys.waveguide.omega_c();
    const double d2 = E - sys.tga.omega_e();
    const cplx eik = std::polar(1.0, k);
    const cplx i(0.0, 1.0);

    const cplx den_plus = (d1 + xi * (eik - 1.0)) * (d2 + t1) - J * J;
    const cplx den_minus = (d1 + xi * (eik + 1.0)) * (d2 - t1) - J * J;
    const double tiny = 1e-14 * xi * xi;
    if (std::abs(den_plus) < tiny || std::abs(den_minus) < tiny) {
        throw DivisionNearZero("reflection_n1_analytic: denominator vanishes at this k");
    }
    return i * xi * (d2 + t1) * std::sin(k) / den_plus +
           i * xi * (d2 - t1) * std::sin(k) / den_minus - 1.0;
}

ScatteringSolution solve_single_point(const SystemParams& sys, double k) {
    require_scattering_k(k);
    require_open(sys.tga, "solve_single_point");
    if (sys.coupling.mode() != CouplingMode::SinglePoint) {
        throw InvalidParameter("solve_single_point: requires single-point coupling");
    }

    const int L = sys.tga.n_cells();
    const Eigen::Index n = 2 + 2 * L;
    constexpr Eigen::Index ir = 0, it = 1;
    auto iX = [](int l) -> Eigen::Index { return 2 + 2 * (l - 1); };
    auto iY = [](int l) -> Eigen::Index { return 3 + 2 * (l - 1); };

    const double wc = sys.waveguide.omega_c();
    const double xi = sys.waveguide.xi();
    const double we = sys.tga.omega_e();
    const double t1 = sys.tga.t1();
    const double t2 = sys.tga.t2();
    const double J = sys.coupling.J();
    const double E = dispersion(sys.waveguide, k);

    // U_j = e^{ikj} + r e^{-ikj} (j <= 0),  t e^{ikj} (j > 0)
    auto field = [&](int j) {
        Affine a{0.0, RowVec::Zero(n)};
        if (j <= 0) {
            a.c = phase(k, j);
            a.w(ir) = phase(-k, j);
        } else {
            a.w(it) = phase(k, j);
        }
        return a;
    };
    auto crw_equation = [&](int j) {
        Affine eq{0.0, RowVec::Zero(n)};
        for (const auto& [coef, jj] : {std::pair<cplx, int>{E - wc, j}, {xi, j - 1}, {xi, j + 1}}) {
            const Affine f = field(jj);
            eq.c += coef * f.c;
            eq.w += coef * f.w;
        }
        if (j == 0) eq.w(iX(1)) -= J;
        return eq;
    };

    std::vector<Affine> rows;
    {
        Affine cont{1.0, RowVec::Zero(n)};  // 1 + r - t = 0
        cont.w(ir) = 1.0;
        cont.w(it) = -1.0;
        rows.push_back(cont);
    }
    rows.push_back(crw_equation(0));
    std::vector<Affine> chain;
    for (int l = 1; l <= L; ++l) {
        Affine ea{0.0, RowVec::Zero(n)};
        ea.w(iX(l)) = E - we;
        ea.w(iY(l)) = -t1;
        if (l > 1) ea.w(iY(l - 1)) = -t2;
        if (l == 1) {
            const Affine u0 = field(0);
            ea.c -= J * u0.c;
            ea.w -= J * u0.w;
        }
        chain.push_back(ea);

        Affine eb{0.0, RowVec::Zero(n)};
        eb.w(iY(l)) = E - we;
        eb.w(iX(l)) = -t1;
        if (l < L) eb.w(iX(l + 1)) = -t2;
        chain.push_back(eb);
    }
    rows.insert(rows.end(), chain.begin(), chain.end());

    const Eigen::VectorXcd x = solve_rows(rows, n);
    auto eval = [&](const Affine& a) { return a.c + (a.w * x)(0); };
    double residual = std::abs(eval(rows[0]));
    for (int j = -3; j <= 3; ++j) {
        residual = std::max(residual, std::abs(eval(crw_equation(j))));
    }
    for (const auto& eq : chain) {
        residual = std::max(residual, std::abs(eval(eq)));
    }

    ScatteringSolution sol;
    sol.k = k;
    sol.energy = E;
    sol.r = x(ir);
    sol.t = x(it);
    sol.A = 0.0;
    sol.B = 0.0;
    sol.tga_amplitudes.assign(x.data() + 2, x.data() + n);
    sol.residual = residual;
    return sol;
}

ScatteringSolution solve(const SystemParams& sys, double k) {
    return sys.coupling.mode() == CouplingMode::TwoPoint ? solve_scattering(sys, k)
                                                         : solve_single_point(sys, k);
}

std::vector<double> linspace(double lo, double hi, int points) {
    std::vector<double> out;
    if (points <= 0) return out;
    out.reserve(static_cast<std::size_t>(points));
    if (points == 1) {
        out.push_back(lo);
        return out;
    }
    const double step = (hi - lo) / (points - 1);
    for (int i = 0; i < points; ++i) {
        out.push_back(i + 1 == points ? hi : lo + i * step);
    }
    return out;
}

SweepTable sweep_reflection(const SystemParams& sys, std::span<const double> delta2_grid) {
    if (delta2_grid.empty()) {
        throw EmptyGrid("sweep_reflection: empty detuning grid");
    }
    SweepTable table{sys, {}};
    table.rows.reserve(delta2_grid.size());
    for (const double d2 : delta2_grid) {
        const double E = sys.tga.omega_e() + d2;
        if (!in_band(sys.waveguide, E)) {
            table.rows.push_back({d2, E, kNaN, kNaN, kNaN, false});
            continue;
        }
        const double k = inverse_dispersion(sys.waveguide, E);
        const ScatteringSolution s = solve(sys, k);
        table.rows.push_back({d2, E, k, s.reflectance(), s.transmittance(), true});
    }
    return table;
}

int wavepacket_launch_distance(double sigma_k) {
    return static_cast<int>(std::ceil(6.0 / sigma_k));
}

WavepacketResult wavepacket_transmission(const SystemParams& sys, double k0, double sigma_k,
                                         int m_sites, double t_max) {
    require_scattering_k(k0);
    if (!(sigma_k > 0.0 && sigma_k <= 0.05)) {
        throw InvalidParameter("wavepacket_transmission: sigma_k must lie in (0, 0.05]");
    }
    const int N = sys.tga.span();
    const int launch = wavepacket_launch_distance(sigma_k);
    const double sigma_x = 1.0 / (2.0 * sigma_k);
    const double v_group = 2.0 * sys.waveguide.xi() * std::sin(k0);
    if (m_sites <= 0) m_sites = 4 * launch + N + 1;
    if (t_max <= 0.0) t_max = (2.0 * launch + N) / v_group;

    const DenseHamiltonian h = build_truncated_system(sys, m_sites);
    const Eigen::Index origin = crw_origin(sys.tga, m_sites);
    if (origin < launch + 6.0 * sigma_x) {
        throw LatticeTooSmall("wavepacket_transmission: packet does not fit left of the chain");
    }
    // ballistic reach of the packet centre, either reflected or transmitted
    const double reach = v_group * t_max - launch + 6.0 * sigma_x;
    if (reach > static_cast<double>(origin) || reach > static_cast<double>(m_sites - 1 - origin)) {
        throw LatticeTooSmall("wavepacket_transmission: packet reaches the walls before t_max");
    }

    Eigen::VectorXcd psi0 = Eigen::VectorXcd::Zero(h.dim());
    for (Eigen::Index i = 0; i < m_sites; ++i) {
        const double j = static_cast<double>(i - origin);
        const double x = j + launch;
        psi0(i) = std::exp(-x * x / (4.0 * sigma_x * sigma_x)) * std::polar(1.0, k0 * j);
    }
    psi0.normalize();

    const Eigen::MatrixXd hr = h.entries.real();
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(hr);
    if (eig.info() != Eigen::Success) {
        throw NumericalError("wavepacket_transmission: eigendecomposition failed");
    }
    const Eigen::MatrixXd& V = eig.eigenvectors();
    Eigen::VectorXcd c = V.transpose() * psi0;
    for (Eigen::Index i = 0; i < c.size(); ++i) {
        c(i) *= std::polar(1.0, -eig.eigenvalues()(i) * t_max);
    }
    const Eigen::VectorXcd psi = V * c;

    const int right_edge = sys.coupling.mode() == CouplingMode::TwoPoint ? N : 0;
    WavepacketResult out;
    out.m_sites = m_sites;
    out.t_max = t_max;
    for (Eigen::Index i = 0; i < m_sites; ++i) {
        const Eigen::Index j = i - origin;
        const double p = std::norm(psi(i));
        if (j < 0) out.R += p;
        if (j > right_edge) out.T += p;
    }
    constexpr int kEdgeSites = 5;
    for (int i = 0; i < kEdgeSites; ++i) {
        out.edge_norm += std::norm(psi(i)) + std::norm(psi(m_sites - 1 - i));
    }
    out.trapped = std::max(0.0, 1.0 - out.R - out.T);
    if (out.edge_norm > 1e-6) {
        throw LatticeTooSmall("wavepacket_transmission: wall echo detected (edge norm " +
                              std::to_string(out.edge_norm) + ")");
    }
    return out;
}

double packet_averaged_transmittance(const SystemParams& sys, double k0, double sigma_k) {
    require_scattering_k(k0);
    if (!(sigma_k > 0.0)) throw InvalidParameter("packet_averaged_transmittance: sigma_k must be positive");
    // |phi(k)|^2 ~ exp(-(k - k0)^2 / (2 sigma_k^2)), cut at 6 sigma_k and at the band edges
    constexpr int kNodes = 801;
    double num = 0.0, den = 0.0;
    for (int i = 0; i < kNodes; ++i) {
        const double u = -6.0 + 12.0 * i / (kNodes - 1);
        const double k = k0 + u * sigma_k;
        if (k <= 1e-6 || k >= std::numbers::pi - 1e-6) continue;
        const double w = std::exp(-0.5 * u * u);
        num += w * solve(sys, k).transmittance();
        den += w;
    }
    return num / den;
}

}  // namespace tga
