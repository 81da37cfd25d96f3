#include "tga/cli.hpp"
#include "tga/dynamics.hpp"
#include "tga/errors.hpp"
#include "tga/scattering.hpp"
#include "tga/spectrum.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>
#include <functional>
#include <numbers>
#include <ostream>
#include <random>

namespace tga::cli {

namespace {

struct Draw {
    std::mt19937_64 rng;
    double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng); }
    int cells(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); }

    SystemParams system(int max_cells, Boundary boundary = Boundary::open()) {
        return {WaveguideParams(20.0, 1.0),
                TgaParams(cells(1, max_cells), 20.0 + uniform(-1.0, 1.0), uniform(0.05, 1.0),
                          uniform(0.05, 1.0), boundary),
                CouplingConfig(uniform(0.1, 1.0))};
    }
};

}  // namespace

bool run_selftest(std::uint64_t seed, std::ostream& out) {
    Draw draw{std::mt19937_64(seed)};
    bool all = true;
    auto check = [&](const std::string& name, const std::function<bool()>& body) {
        bool ok = false;
        try {
            ok = body();
        } catch (const std::exception& e) {
            out << "  exception: " << e.what() << '\n';
        }
        out << (ok ? "PASS  " : "FAIL  ") << name << '\n';
        all = all && ok;
    };

    check("hermiticity of assembled Hamiltonians", [&] {
        for (int i = 0; i < 5; ++i) {
            const Boundary b = i % 2 ? Boundary::periodic() : Boundary::open();
            const SystemParams sys = draw.system(8, b);
            if (build_truncated_system(sys, min_truncation(sys.tga) + 10).hermiticity_defect() >= 1e-12)
                return false;
        }
        return true;
    });

    check("closed-form N = 1 reflection matches the linear solve", [&] {
        for (int i = 0; i < 5; ++i) {
            const SystemParams sys{WaveguideParams(20.0, 1.0),
                                   TgaParams(1, 20.0 + draw.uniform(-2.0, 2.0), draw.uniform(0.01, 1.0), 0.0),
                                   CouplingConfig(draw.uniform(0.01, 1.0))};
            for (double k : linspace(0.05, std::numbers::pi - 0.05, 40)) {
                if (std::abs(solve_scattering(sys, k).r - reflection_n1_analytic(sys, k)) >= 1e-10)
                    return false;
            }
        }
        return true;
    });

    check("unitarity, residual and reciprocity of scattering", [&] {
        for (int i = 0; i < 5; ++i) {
            const SystemParams sys = draw.system(5);
            for (double k : linspace(0.05, std::numbers::pi - 0.05, 40)) {
                const auto left = solve_scattering(sys, k, Incidence::Left);
                const auto right = solve_scattering(sys, k, Incidence::Right);
                if (std::abs(left.reflectance() + left.transmittance() - 1.0) >= 1e-10) return false;
                if (left.residual >= 1e-10) return false;
                if (std::abs(left.transmittance() - right.transmittance()) >= 1e-10) return false;
            }
        }
        return true;
    });

    check("decoupled spectrum is the union of the parts", [&] {
        const SystemParams coupled = draw.system(4);
        const SystemParams sys{coupled.waveguide, coupled.tga, CouplingConfig(0.0)};
        const int m = min_truncation(sys.tga) + 15;
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> full(build_truncated_system(sys, m).entries.real());
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> chain(build_tga_hamiltonian(sys.tga).entries.real());
        std::vector<double> parts;
        for (int j = 1; j <= m; ++j) parts.push_back(20.0 - 2.0 * std::cos(j * std::numbers::pi / (m + 1)));
        for (Eigen::Index i = 0; i < chain.eigenvalues().size(); ++i) parts.push_back(chain.eigenvalues()(i));
        std::sort(parts.begin(), parts.end());
        for (std::size_t i = 0; i < parts.size(); ++i) {
            if (std::abs(parts[i] - full.eigenvalues()(static_cast<Eigen::Index>(i))) >= 1e-10) return false;
        }
        return true;
    });

    check("winding number matches edge modes of the open chain", [&] {
        for (int i = 0; i < 10; ++i) {
            double t1 = draw.uniform(0.05, 1.0);
            double t2 = draw.uniform(0.05, 1.0);
            if (std::max(t1, t2) / std::min(t1, t2) < 1.33) continue;
            const int w = winding_number(t1, t2, 1024).winding;
            if (w != winding_number(t1, t2, 4096).winding) return false;
            if ((w == 1) != edge_state_check(TgaParams(15, 20.0, t1, t2))) return false;
        }
        return true;
    });

    check("norm conservation of the lossless probe evolution", [&] {
        const SystemParams sys = draw.system(3);
        const ProbeParams probe{19.5, 0.0, 0.05, 0};
        const TimeSeries ts = evolve_probe(sys, probe, min_truncation(sys.tga) + 40, {50.0, 0.01, 1.0});
        for (double v : ts.total_norm) {
            if (std::abs(v - 1.0) > 1e-8) return false;
        }
        return ts.p_e.front() == 1.0;
    });

    return all;
}

}  // namespace tga::cli
