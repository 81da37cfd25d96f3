// scattering.hpp — exact single-photon scattering off the open SSH chain
//
// The photon amplitude on the waveguide is taken piecewise as plane waves
// (incident + reflected left of site 0, A/B counter-propagating inside [0, N],
// transmitted right of N). Continuity at 0 and N, the Schrodinger equation at
// the two coupling sites and the 2L chain equations form one dense complex
// linear system in {r, t, A, B, X_1, Y_1, ..., X_L, Y_L}.

#pragma once

#include "tga/model.hpp"

#include <span>
#include <vector>

namespace tga {

enum class Incidence { Left, Right };

struct ScatteringSolution {
    double k = 0.0;
    double energy = 0.0;
    cplx r;
    cplx t;
    cplx A;  // right mover inside [0, N]
    cplx B;  // left mover inside [0, N]
    std::vector<cplx> tga_amplitudes;  // X_1, Y_1, X_2, Y_2, ...
    double residual = 0.0;             // max defect over all site equations

    double reflectance() const { return std::norm(r); }
    double transmittance() const { return std::norm(t); }
};

// Two-point coupling, open chain. Throws OutOfBand for k outside (0, pi) minus
// the edge margin and SingularSystem when the system is rank deficient.
ScatteringSolution solve_scattering(const SystemParams& sys, double k,
                                    Incidence incidence = Incidence::Left);

// Closed-form reflection amplitude for a single cell (N = 1).
cplx reflection_n1_analytic(const SystemParams& sys, double k);

// Only A_1 couples (to CRW site 0); A and B are unused and set to zero.
ScatteringSolution solve_single_point(const SystemParams& sys, double k);

// Dispatches on sys.coupling.mode().
ScatteringSolution solve(const SystemParams& sys, double k);

struct SweepRow {
    double delta2;  // E - omega_e
    double energy;
    double k;       // NaN when out of band
    double R;       // NaN when out of band
    double T;       // NaN when out of band
    bool in_band;
};

struct SweepTable {
    SystemParams params;
    std::vector<SweepRow> rows;
};

SweepTable sweep_reflection(const SystemParams& sys, std::span<const double> delta2_grid);

// Uniform grid of `points` values on [lo, hi].
std::vector<double> linspace(double lo, double hi, int points);

struct WavepacketResult {
    double R = 0.0;
    double T = 0.0;
    double trapped = 0.0;    // norm left inside the coupling span and on the chain
    double edge_norm = 0.0;  // norm on the outermost CRW sites at t_max
    int m_sites = 0;
    double t_max = 0.0;
};

// |t(k)|^2 weighted by the momentum distribution of a Gaussian packet centred at k0;
// the quantity a finite packet actually measures when |t|^2 varies on the scale sigma_k.
double packet_averaged_transmittance(const SystemParams& sys, double k0, double sigma_k);

// Distance (in sites) from the first coupling site at which the packet is launched.
int wavepacket_launch_distance(double sigma_k);

// Gaussian packet evolved exactly on the truncated lattice. m_sites <= 0 and
// t_max <= 0 select defaults: m_sites = 4 d + N + 1, t_max = (2 d + N) / v_g with
// d the launch distance and v_g the group velocity at k0.
WavepacketResult wavepacket_transmission(const SystemParams& sys, double k0, double sigma_k = 0.02,
                                         int m_sites = 0, double t_max = 0.0);

}  // namespace tga
