// dynamics.hpp — lossy probe atom attached to one waveguide resonator
//
// The probe adds one basis state |e> with diagonal omega_p - i gamma and a real
// coupling f to CRW site attach_site. Amplitudes evolve under -i H_p.

#pragma once

#include "tga/model.hpp"
#include "tga/spectrum.hpp"

#include <optional>
#include <string>
#include <vector>

namespace tga {

struct ProbeParams {
    double omega_p = 0.0;
    double gamma = 0.0;
    double f = 0.0;
    int attach_site = 0;  // CRW index j relative to the first coupling site
};

struct TimeSeries {
    std::vector<double> times;  // units 1/xi
    std::vector<double> p_e;
    std::vector<double> total_norm;
};

struct EvolveOptions {
    double t_max = 2000.0;
    double dt = 0.01;
    double sample_stride = 1.0;
};

DenseHamiltonian build_probe_system(const SystemParams& sys, const ProbeParams& probe, int m_sites);

// Fixed-step two-stage Gauss-Legendre integration (4th order) in the frame
// rotating at omega_c. Throws IntegratorToleranceExceeded if gamma = 0 and the
// norm drifts by more than 1e-8.
TimeSeries evolve_probe(const SystemParams& sys, const ProbeParams& probe, int m_sites,
                        const EvolveOptions& options = {});

struct ExponentialFit {
    double rate = 0.0;       // -d log P_e / dt
    double intercept = 0.0;  // log P_e at t = 0
    double rms_residual = 0.0;
};

// Least-squares line through log P_e over the central 80% of the time window.
ExponentialFit fit_exponential(const TimeSeries& series);

// Message naming the bound states the probe is not far detuned from
// (f >= 0.1 |omega_p - E|); empty when the probe is effectively decoupled.
std::optional<std::string> probe_detuning_warning(const SpectrumResult& spec,
                                                  const ProbeParams& probe);

}  // namespace tga
