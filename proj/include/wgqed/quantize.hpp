#pragma once

// Single-photon normalization of mode amplitudes, the atom-field coupling
// constant g = -(p_ba . E(r0)) / hbar, and the density of states that turns a
// sum over propagation constants into a frequency integral.

#include <string>

#include "wgqed/modes.hpp"
#include "wgqed/numerics.hpp"

namespace wgqed {

struct QuantizationBox {
    double L = 1.0;  // z period used for propagating modes
};

/// EnergyExact fixes |amp|^2 so that the mode energy is exactly hbar*nu for
/// every mode. PrintedClosedForm uses the four published closed forms
/// verbatim; they coincide with EnergyExact for propagating modes with m, n >= 1
/// and differ by h^2/k^2 on the localized branch and by 2 for TE(m,0)/TE(0,n).
enum class Normalization { EnergyExact, PrintedClosedForm };

/// PaperLiteral: group velocity taken equal to 1/sqrt(eps mu).
/// WaveguideDispersion: d(beta)/d(nu) = eps mu nu / beta.
enum class DosModel { PaperLiteral, WaveguideDispersion };

std::string to_string(Normalization n);
std::string to_string(DosModel d);

/// Direction of a propagating mode. MinusZ is the exp(-i beta z) mode of the
/// exp(-gamma z) convention, PlusZ its exp(+i beta z) partner.
enum class Travel { MinusZ, PlusZ };

struct NormalizedMode {
    ModeIndex mode;
    double nu = 0.0;
    Complex amp{};  // E0 for TM, H0 for TE; real and positive
    ModeDispersion branch;
    Normalization normalization = Normalization::EnergyExact;
};

struct Atom {
    Vec3 r0;
    CVec3 dipole;  // p_ab; the coupling uses p_ba = conj(p_ab)
    double omega = 0.0;
};

/// Throws DomainError unless 0 < x0 < a, 0 < y0 < b and omega > 0.
void validate(const WaveguideSpec& spec, const Atom& atom);

struct Coupling {
    ModeIndex mode;
    double nu = 0.0;
    Complex g{};
};

/// |amp|^2 for the chosen convention. Throws DomainError on the cutoff branch.
double amplitude_sq(const WaveguideSpec& spec, const ModeIndex& mode, double nu,
                    const QuantizationBox& box,
                    Normalization normalization = Normalization::EnergyExact);

/// amplitude_sq with a precomputed dispersion (see dispersion_at_offset).
double amplitude_sq(const WaveguideSpec& spec, const ModeIndex& mode, double nu,
                    const ModeDispersion& d, const QuantizationBox& box,
                    Normalization normalization);

NormalizedMode normalize(const WaveguideSpec& spec, const ModeIndex& mode, double nu,
                         const QuantizationBox& box,
                         Normalization normalization = Normalization::EnergyExact);

/// Profile used when a normalized mode is evaluated around an atom at z0:
/// exp(-+i beta z) above cutoff, exp(-gamma |z - z0|) below.
Profile atom_profile(const ModeDispersion& branch, double z0, Travel travel = Travel::MinusZ);

Coupling coupling_at(const WaveguideSpec& spec, const Atom& atom, const ModeIndex& mode,
                     double nu, const QuantizationBox& box = {},
                     Normalization normalization = Normalization::EnergyExact,
                     Travel travel = Travel::MinusZ);

/// coupling_at with a precomputed dispersion.
Coupling coupling_at(const WaveguideSpec& spec, const Atom& atom, const ModeIndex& mode,
                     double nu, const ModeDispersion& d, const QuantizationBox& box,
                     Normalization normalization, Travel travel = Travel::MinusZ);

/// Numerically integrated 1/2 int (eps |E|^2 + mu |H|^2) d^3r over the cross
/// section and [-L/2, L/2] (propagating) or the whole z line (localized).
double mode_energy(const WaveguideSpec& spec, const NormalizedMode& nm,
                   const QuantizationBox& box, const numerics::QuadratureSpec& quad = {});

/// int eps E_A . conj(E_B) d^3r with unit amplitudes, over the cross section
/// and one z period (both propagating) or the whole z line.
Complex mode_overlap(const WaveguideSpec& spec, const ModeIndex& a, const ModeIndex& b, double nu,
                     const QuantizationBox& box = {}, const numerics::QuadratureSpec& quad = {});

/// Density of states per unit frequency for one propagation direction.
/// Throws DomainError off the propagating branch.
double continuum_weight(const WaveguideSpec& spec, const ModeIndex& mode, double nu,
                        const QuantizationBox& box, DosModel dos = DosModel::PaperLiteral);
double continuum_weight(const WaveguideSpec& spec, const ModeIndex& mode, double nu,
                        const ModeDispersion& d, const QuantizationBox& box, DosModel dos);

}  // namespace wgqed
