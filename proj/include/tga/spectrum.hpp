// spectrum.hpp — closed-system spectra, bound states and SSH topology

#pragma once

#include "tga/model.hpp"

#include <vector>

namespace tga {

// Energy distance beyond the band edge required for a bound state (units of xi).
inline constexpr double kBoundGapThreshold = 1e-6;
// Bound states must have participation ratio below this fraction of the dimension.
inline constexpr double kBoundMaxParticipation = 0.2;

enum class BandSide { AboveBand, BelowBand };

std::string to_string(BandSide side);

struct BoundState {
    double energy = 0.0;
    double localization_length = 0.0;  // sites; NaN if the tail could not be fitted
    double fit_residual = 0.0;         // max log-residual over the log-amplitude span
    double participation_ratio = 0.0;
    BandSide side = BandSide::BelowBand;
    Eigen::Index eigen_index = 0;
};

struct SpectrumResult {
    Eigen::VectorXd eigenvalues;   // ascending
    Eigen::MatrixXd eigenvectors;  // columns, matching eigenvalues
    double band_min = 0.0;
    double band_max = 0.0;
    std::vector<BoundState> bound_states;
    SystemParams params;
    int m_sites = 0;
    std::vector<SiteLabel> labels;
};

// 1 / sum |psi_i|^4 for a normalized vector.
double participation_ratio(const Eigen::Ref<const Eigen::VectorXd>& v);

// Smallest m_sites accepted by diagonalize: max(400, 10 N).
int min_diagonalization_sites(const TgaParams& tga);

// Full eigendecomposition of the truncated system; bound_states filled in.
// Within a degenerate cluster, columns are ordered by ascending participation ratio.
SpectrumResult diagonalize(const SystemParams& sys, int m_sites);

// Out-of-band, localized eigenstates with an exponential-tail fit on the CRW.
std::vector<BoundState> find_bound_states(const SpectrumResult& spec);

struct WindingResult {
    int winding = 0;
    double min_abs_h = 0.0;  // closest approach of the Bloch curve to the origin
};

// Winding of h(k) = t1 + t2 e^{-ik} about the origin, counted along the direction
// of traversal of e^{-ik}: 0 for |t1| > |t2|, 1 for |t1| < |t2|.
// Throws GapClosed when |t1| = |t2|.
WindingResult winding_number(double t1, double t2, int k_points = 4096);

// Energy window about omega_e in which finite-chain edge modes are searched.
double edge_state_tolerance(const TgaParams& tga);

// True iff the open chain hosts near-zero-energy modes localized at its ends.
bool edge_state_check(const TgaParams& tga);

}  // namespace tga
