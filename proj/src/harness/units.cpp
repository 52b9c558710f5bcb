#include "dwol/harness/units.hpp"

#include <cmath>
#include <map>
#include <regex>

namespace dwol::harness {

namespace {

constexpr double kHbarSI = 1.054571817e-34;
constexpr double kPlanckSI = 6.62607015e-34;
constexpr double kAtomicMassSI = 1.66053906660e-27;

const std::map<std::string, double> kSiLength{{"m", 1.0}, {"mm", 1e-3}, {"um", 1e-6}, {"nm", 1e-9}};
const std::map<std::string, double> kSiTime{{"s", 1.0}, {"ms", 1e-3}, {"us", 1e-6}};
const std::map<std::string, double> kSiEnergy{{"J", 1.0}};
const std::map<std::string, double> kSiFrequency{{"Hz", 1.0}, {"kHz", 1e3}, {"MHz", 1e6}};

double parse_number(const std::string& s) {
    std::size_t used = 0;
    const double v = std::stod(s, &used);
    if (used != s.size()) throw ConfigError("malformed number '" + s + "'");
    return v;
}

struct Si {
    double k;  // 1/m
    double m;  // kg
};

Si require_si(const UnitContext& ctx, const std::string& unit) {
    if (!ctx.wavelength_m || !ctx.mass_kg)
        throw ConfigError("SI unit '" + unit + "' needs units.wavelength and units.mass");
    return {2 * M_PI / *ctx.wavelength_m, *ctx.mass_kg};
}

const HarmonicModel& require_harmonic(const UnitContext& ctx, const std::string& unit) {
    if (!ctx.harmonic) throw ConfigError("unit '" + unit + "' is not available before the lattice is resolved");
    return *ctx.harmonic;
}

}  // namespace

const char* dimension_name(Dimension dim) {
    switch (dim) {
        case Dimension::energy: return "energy";
        case Dimension::length: return "length";
        case Dimension::time: return "time";
        case Dimension::angle: return "angle";
    }
    return "?";
}

Quantity split_quantity(const std::string& text) {
    static const std::regex re(
        R"(^\s*([-+]?(?:\d+\.?\d*|\.\d+)(?:[eE][-+]?\d+)?)?\s*\*?\s*(pi)?\s*(?:/\s*((?:\d+\.?\d*|\.\d+)(?:[eE][-+]?\d+)?))?\s*(.*?)\s*$)");
    std::smatch m;
    if (!std::regex_match(text, m, re) || (!m[1].matched && !m[2].matched))
        throw ConfigError("cannot read quantity '" + text + "'");
    Quantity q;
    q.number = m[1].matched ? parse_number(m[1].str()) : 1.0;
    if (m[2].matched) q.number *= M_PI;
    if (m[3].matched) {
        const double den = parse_number(m[3].str());
        if (den == 0) throw ConfigError("division by zero in '" + text + "'");
        q.number /= den;
    }
    q.unit = m[4].str();
    if (m[2].matched && q.unit.empty()) q.unit = "rad";
    return q;
}

double to_internal(const Quantity& q, Dimension dim, const UnitContext& ctx) {
    const std::string& u = q.unit;
    const double e_r = ctx.k_L * ctx.k_L / (2 * ctx.mass);
    auto bad = [&]() -> double {
        throw ConfigError("unit '" + u + "' is not a " + dimension_name(dim) + " unit");
    };
    if (u.empty()) throw ConfigError(std::string("missing unit tag on ") + dimension_name(dim) + " value");
    switch (dim) {
        case Dimension::energy:
            if (u == "E_R") return q.number * e_r;
            if (kSiEnergy.count(u)) {
                const Si si = require_si(ctx, u);
                return q.number * kSiEnergy.at(u) / (kHbarSI * kHbarSI * si.k * si.k / si.m);
            }
            if (kSiFrequency.count(u)) {
                const Si si = require_si(ctx, u);
                return q.number * kSiFrequency.at(u) * kPlanckSI / (kHbarSI * kHbarSI * si.k * si.k / si.m);
            }
            return bad();
        case Dimension::length:
            if (u == "l_x") return q.number * require_harmonic(ctx, u).l_x;
            if (u == "l_y") return q.number * require_harmonic(ctx, u).l_y;
            if (u == "l_z") return q.number * require_harmonic(ctx, u).l_z;
            if (u == "l_r") {
                if (!ctx.l_r) throw ConfigError("unit 'l_r' needs an explicit units.l_r");
                return q.number * *ctx.l_r;
            }
            if (u == "1/k_L") return q.number / ctx.k_L;
            if (u == "lambda_L") return q.number * 2 * M_PI / ctx.k_L;
            if (kSiLength.count(u)) return q.number * kSiLength.at(u) * require_si(ctx, u).k / ctx.k_L;
            return bad();
        case Dimension::time:
            if (u == "T_x") return q.number * require_harmonic(ctx, u).t_x;
            if (u == "T_y") return q.number * require_harmonic(ctx, u).t_y;
            if (kSiTime.count(u)) {
                const Si si = require_si(ctx, u);
                return q.number * kSiTime.at(u) * kHbarSI * si.k * si.k / si.m;
            }
            return bad();
        case Dimension::angle:
            if (u == "rad") return q.number;
            if (u == "deg") return q.number * M_PI / 180;
            return bad();
    }
    return bad();
}

double parse_quantity(const std::string& text, Dimension dim, const UnitContext& ctx) {
    return to_internal(split_quantity(text), dim, ctx);
}

double parse_si_length(const std::string& text) {
    const Quantity q = split_quantity(text);
    if (!kSiLength.count(q.unit)) throw ConfigError("'" + text + "' is not an SI length");
    return q.number * kSiLength.at(q.unit);
}

double parse_si_mass(const std::string& text) {
    const Quantity q = split_quantity(text);
    if (q.unit == "kg") return q.number;
    if (q.unit == "u") return q.number * kAtomicMassSI;
    throw ConfigError("'" + text + "' is not a mass in kg or u");
}

}  // namespace dwol::harness
