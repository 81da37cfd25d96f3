// model.hpp — parameter types and single-excitation Hamiltonians for a
// coupled-resonator waveguide (CRW) attached at two sites to a finite SSH chain.
//
// Basis ordering of every assembled matrix:
//   CRW sites left -> right, then A_1, B_1, ..., A_L, B_L, then the probe (if any).
// All energies are in units of the CRW hopping xi.

#pragma once

#include <Eigen/Dense>

#include <complex>
#include <cstddef>
#include <string>
#include <vector>

namespace tga {

using cplx = std::complex<double>;

// Half-width of the excluded region at each band edge, in units of the
// cosine argument (omega_c - E) / (2 xi).
inline constexpr double kBandEdgeMargin = 1e-6;

class WaveguideParams {
public:
    WaveguideParams(double omega_c, double xi);

    double omega_c() const noexcept { return omega_c_; }
    double xi() const noexcept { return xi_; }
    double band_min() const noexcept { return omega_c_ - 2.0 * xi_; }
    double band_max() const noexcept { return omega_c_ + 2.0 * xi_; }

private:
    double omega_c_;
    double xi_;
};

enum class BoundaryKind { Open, Periodic, Custom };

struct Boundary {
    BoundaryKind kind = BoundaryKind::Open;
    double custom_t3 = 0.0;  // used only for Custom

    static Boundary open() { return {BoundaryKind::Open, 0.0}; }
    static Boundary periodic() { return {BoundaryKind::Periodic, 0.0}; }
    static Boundary custom(double t3) { return {BoundaryKind::Custom, t3}; }
};

std::string to_string(BoundaryKind kind);

// SSH chain of L unit cells (N + 1 = 2L sites, N odd).
class TgaParams {
public:
    TgaParams(int n_cells, double omega_e, double t1, double t2,
              Boundary boundary = Boundary::open());

    int n_cells() const noexcept { return n_cells_; }
    int span() const noexcept { return 2 * n_cells_ - 1; }  // N
    int n_sites() const noexcept { return 2 * n_cells_; }   // N + 1
    double omega_e() const noexcept { return omega_e_; }
    double t1() const noexcept { return t1_; }
    double t2() const noexcept { return t2_; }
    double t3() const noexcept;
    const Boundary& boundary() const noexcept { return boundary_; }

    // Same chain with a different closing bond.
    TgaParams with_boundary(Boundary boundary) const;

private:
    int n_cells_;
    double omega_e_;
    double t1_;
    double t2_;
    Boundary boundary_;
};

enum class CouplingMode {
    TwoPoint,    // CRW 0 <-> A_1 and CRW N <-> B_L
    SinglePoint  // CRW 0 <-> A_1 only
};

class CouplingConfig {
public:
    CouplingConfig(double J, CouplingMode mode = CouplingMode::TwoPoint);

    double J() const noexcept { return J_; }
    CouplingMode mode() const noexcept { return mode_; }

private:
    double J_;
    CouplingMode mode_;
};

struct SystemParams {
    WaveguideParams waveguide;
    TgaParams tga;
    CouplingConfig coupling;
};

enum class SiteKind { Crw, TgaA, TgaB, Probe };

struct SiteLabel {
    SiteKind kind;
    int index;  // CRW: j relative to the first coupling site; TGA: cell l (1-based); probe: 0

    friend bool operator==(const SiteLabel&, const SiteLabel&) = default;
};

std::string to_string(const SiteLabel& label);

struct DenseHamiltonian {
    Eigen::MatrixXcd entries;
    std::vector<SiteLabel> labels;

    Eigen::Index dim() const noexcept { return entries.rows(); }

    // Matrix index of a label; throws InvalidParameter when absent.
    Eigen::Index index_of(const SiteLabel& label) const;

    // max |H_ij - conj(H_ji)|
    double hermiticity_defect() const;
};

// Smallest CRW truncation accepted by build_truncated_system.
int min_truncation(const TgaParams& tga);

// Matrix index of CRW site j = 0 in a truncated system of m_sites CRW sites.
Eigen::Index crw_origin(const TgaParams& tga, int m_sites);

DenseHamiltonian build_tga_hamiltonian(const TgaParams& tga);

// Hard-wall CRW of m_sites resonators with the coupling span [0, N] centered.
DenseHamiltonian build_truncated_system(const SystemParams& sys, int m_sites);

// E_k = omega_c - 2 xi cos k on the right-moving branch k in (0, pi).
double dispersion(const WaveguideParams& waveguide, double k);

// Inverse of dispersion; throws OutOfBand outside the band or within the edge margin.
double inverse_dispersion(const WaveguideParams& waveguide, double energy);

// True when energy lies inside the band minus the edge margin.
bool in_band(const WaveguideParams& waveguide, double energy);

}  // namespace tga
