#pragma once

#include <optional>
#include <stdexcept>
#include <string>

#include "dwol/lattice.hpp"

namespace dwol::harness {

// Configuration and usage failures (exit code 2), kept apart from numerical errors.
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

enum class Dimension { energy, length, time, angle };

// Everything needed to turn a unit tag into internal units (hbar = m = k_L = 1).
struct UnitContext {
    double k_L = 1.0;
    double mass = 1.0;
    std::optional<HarmonicModel> harmonic;  // enables l_x, l_y, l_z, T_x, T_y
    std::optional<double> l_r;              // internal length, only when given explicitly
    std::optional<double> wavelength_m;     // enables SI tags together with mass_kg
    std::optional<double> mass_kg;
};

struct Quantity {
    double number = 0.0;  // numeric part as written, pi factors applied
    std::string unit;
};

// "<number> [pi] [/ <number>] <unit>", e.g. "300 E_R", "0.5 pi", "3 pi/20", "158 l_x".
Quantity split_quantity(const std::string& text);

double to_internal(const Quantity& q, Dimension dim, const UnitContext& ctx);
double parse_quantity(const std::string& text, Dimension dim, const UnitContext& ctx);

// SI values for the units block.
double parse_si_length(const std::string& text);
double parse_si_mass(const std::string& text);

const char* dimension_name(Dimension dim);

}  // namespace dwol::harness
