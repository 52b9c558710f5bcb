#include "dwol/harness/config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "dwol/errors.hpp"

namespace dwol::harness {

namespace {

// Allowed keys per object; paths listed here are nested objects.
const std::map<std::string, std::set<std::string>>& schema() {
    static const std::map<std::string, std::set<std::string>> s{
        {"", {"units", "lattice", "potential", "transport", "method", "grid", "propagation", "ite", "sweep", "output",
              "seed"}},
        {"units", {"wavelength", "mass", "l_r"}},
        {"lattice",
         {"depth", "beta", "theta", "phi", "xi_z", "k_z", "waist_x", "waist_y", "rayleigh_x", "rayleigh_y"}},
        {"transport", {"direction", "distance", "t_f"}},
        {"method", {"kind", "cutoff", "basis", "force_zero"}},
        {"grid", {"n", "extent", "center"}},
        {"propagation",
         {"max_rel_error", "min_steps", "max_steps", "adaptive", "dt_initial", "guard_threshold", "guard_action"}},
        {"ite", {"tol_energy", "dtau", "final_ratio", "max_iterations", "seed"}},
        {"sweep", {"variable", "values", "from", "to", "count", "methods"}},
        {"output", {"snapshot_fractions", "trajectory_rows"}},
    };
    return s;
}

const Json& defaults() {
    static const Json d = Json::parse(R"({
        "lattice": {"beta": "3 pi/20", "theta": "pi/2", "phi": "pi/2", "xi_z": 0.0, "k_z": 0.5,
                    "waist_x": "4200 l_x", "waist_y": "4200 l_x",
                    "rayleigh_x": "1e8 1/k_L", "rayleigh_y": "1e8 1/k_L"},
        "potential": "full",
        "transport": {"direction": "x"},
        "method": {"kind": "STA", "cutoff": 2, "basis": "exact15", "force_zero": false},
        "grid": {"n": [200, 300, 100], "extent": ["100 l_x", "100 l_y", "500 l_z"]},
        "propagation": {"max_rel_error": 1e-4, "min_steps": 20, "max_steps": 1000000, "adaptive": true,
                        "guard_threshold": 1e-6, "guard_action": "flag"},
        "ite": {"tol_energy": 1e-10, "final_ratio": 0.015625, "max_iterations": 200000, "seed": "harmonic"},
        "output": {"snapshot_fractions": [], "trajectory_rows": 201},
        "seed": 1
    })");
    return d;
}

std::string join(const std::string& path, const std::string& key) { return path.empty() ? key : path + "." + key; }

const Json& at(const Json& obj, const std::string& key, const std::string& path) {
    if (!obj.contains(key)) throw ConfigError(join(path, key) + ": required value is missing");
    return obj.at(key);
}

std::string text(const Json& v, const std::string& path) {
    if (!v.is_string()) throw ConfigError(path + ": expected a unit-tagged string such as \"300 E_R\"");
    return v.get<std::string>();
}

double number(const Json& v, const std::string& path) {
    if (!v.is_number()) throw ConfigError(path + ": expected a number");
    return v.get<double>();
}

long integer(const Json& v, const std::string& path) {
    if (!v.is_number_integer()) throw ConfigError(path + ": expected an integer");
    return v.get<long>();
}

bool boolean(const Json& v, const std::string& path) {
    if (!v.is_boolean()) throw ConfigError(path + ": expected true or false");
    return v.get<bool>();
}

double quantity(const Json& v, const std::string& path, Dimension dim, const UnitContext& ctx) {
    try {
        return parse_quantity(text(v, path), dim, ctx);
    } catch (const ConfigError& e) {
        const std::string msg = e.what();
        if (msg.rfind(path, 0) == 0) throw;
        throw ConfigError(path + ": " + msg);
    } catch (const std::exception& e) {
        throw ConfigError(path + ": " + e.what());
    }
}

template <typename T>
T choice(const Json& v, const std::string& path, const std::map<std::string, T>& options) {
    if (v.is_string()) {
        auto it = options.find(v.get<std::string>());
        if (it != options.end()) return it->second;
    }
    std::string list;
    for (const auto& [k, _] : options) list += (list.empty() ? "" : ", ") + k;
    throw ConfigError(path + ": expected one of " + list);
}

const std::map<std::string, Provenance> kMethods{{"STA", Provenance::STA}, {"eSTA", Provenance::ESTA}};

void check_object(const Json& v, const std::string& path) {
    if (!v.is_object()) throw ConfigError((path.empty() ? std::string("document") : path) + ": expected an object");
    const auto& allowed = schema().at(path);
    for (auto it = v.begin(); it != v.end(); ++it) {
        const std::string p = join(path, it.key());
        if (!allowed.count(it.key())) throw ConfigError(p + ": unknown key");
        if (schema().count(p)) check_object(it.value(), p);
    }
}

Json vec3(const Eigen::Vector3d& v) { return Json::array({v.x(), v.y(), v.z()}); }

}  // namespace

Json parse_config_text(const std::string& body) {
    try {
        return Json::parse(body, nullptr, true, true);
    } catch (const Json::parse_error& e) {
        // Convert the byte offset into line and column.
        std::size_t line = 1, col = 1;
        for (std::size_t i = 0; i < std::min(e.byte, body.size() + 1) - 1 && i < body.size(); ++i) {
            if (body[i] == '\n') {
                ++line;
                col = 1;
            } else {
                ++col;
            }
        }
        throw ConfigError("config syntax error at line " + std::to_string(line) + ", column " + std::to_string(col) +
                          ": " + e.what());
    }
}

Json load_config(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw ConfigError("cannot open config file " + path);
    std::stringstream ss;
    ss << is.rdbuf();
    return parse_config_text(ss.str());
}

void check_schema(const Json& doc) { check_object(doc, ""); }

EstaOptions ResolvedRun::esta_options() const {
    EstaOptions o;
    o.cutoff = method.cutoff;
    o.planar = planar();
    o.basis = method.basis;
    return o;
}

TransportSetup ResolvedRun::setup() const {
    TransportSetup s;
    s.lattice = lattice;
    s.model = model;
    s.grid = grid;
    s.propagation = propagation;
    s.ite = ite;
    s.seed = ite_seed;
    return s;
}

ResolvedRun resolve(const Json& input) {
    check_schema(input);
    Json doc = defaults();
    doc.merge_patch(input);
    ResolvedRun r;
    UnitContext& ctx = r.units;

    if (doc.contains("units")) {
        const Json& u = doc["units"];
        if (u.contains("wavelength")) ctx.wavelength_m = parse_si_length(text(u["wavelength"], "units.wavelength"));
        if (u.contains("mass")) ctx.mass_kg = parse_si_mass(text(u["mass"], "units.mass"));
    }

    const Json& lat = doc["lattice"];
    LatticeParams& p = r.lattice;
    p.u_d0 = quantity(at(lat, "depth", "lattice"), "lattice.depth", Dimension::energy, ctx);
    p.beta = quantity(lat["beta"], "lattice.beta", Dimension::angle, ctx);
    p.theta = quantity(lat["theta"], "lattice.theta", Dimension::angle, ctx);
    p.phi = quantity(lat["phi"], "lattice.phi", Dimension::angle, ctx);
    p.xi_z = number(lat["xi_z"], "lattice.xi_z");
    p.k_z = number(lat["k_z"], "lattice.k_z");
    r.model = choice(doc["potential"], "potential",
                     std::map<std::string, PotentialModel>{{"full", PotentialModel::full},
                                                           {"harmonic", PotentialModel::harmonic}});

    const Json& g = doc["grid"];
    if (!g["n"].is_array() || g["n"].size() != 3) throw ConfigError("grid.n: expected three point counts");
    for (int a = 0; a < 3; ++a) {
        const long n = integer(g["n"][a], "grid.n[" + std::to_string(a) + "]");
        if (n < 1) throw ConfigError("grid.n[" + std::to_string(a) + "]: must be positive");
        r.grid.n[a] = static_cast<int>(n);
    }
    const Confinement conf = r.grid.n[2] == 1 ? Confinement::Planar : Confinement::Full;
    try {
        ctx.harmonic = harmonic_approximation(p, conf);
    } catch (const NonConfining& e) {
        throw ConfigError(std::string("lattice: ") + e.what() +
                          (conf == Confinement::Full ? "; use lattice.xi_z > 0 or a planar grid (grid.n[2] = 1)" : ""));
    } catch (const Error& e) {
        throw ConfigError(std::string("lattice: ") + e.what());
    }
    if (doc.contains("units") && doc["units"].contains("l_r"))
        ctx.l_r = quantity(doc["units"]["l_r"], "units.l_r", Dimension::length, ctx);

    p.w0x = quantity(lat["waist_x"], "lattice.waist_x", Dimension::length, ctx);
    p.w0y = quantity(lat["waist_y"], "lattice.waist_y", Dimension::length, ctx);
    p.z_Rx = quantity(lat["rayleigh_x"], "lattice.rayleigh_x", Dimension::length, ctx);
    p.z_Ry = quantity(lat["rayleigh_y"], "lattice.rayleigh_y", Dimension::length, ctx);
    try {
        r.harmonic = harmonic_approximation(p, conf);
    } catch (const Error& e) {
        throw ConfigError(std::string("lattice: ") + e.what());
    }
    ctx.harmonic = r.harmonic;
    r.warnings = validity_warnings(p, r.harmonic);

    const Json& tr = doc["transport"];
    r.transport.direction = choice(tr["direction"], "transport.direction",
                                   std::map<std::string, Direction>{
                                       {"x", Direction::x}, {"y", Direction::y}, {"diagonal", Direction::diagonal}});
    r.transport.distance = quantity(at(tr, "distance", "transport"), "transport.distance", Dimension::length, ctx);
    r.transport.t_f = quantity(at(tr, "t_f", "transport"), "transport.t_f", Dimension::time, ctx);
    if (!(r.transport.distance >= 0)) throw ConfigError("transport.distance: must not be negative");
    if (!(r.transport.t_f > 0)) throw ConfigError("transport.t_f: must be positive");

    const Json& m = doc["method"];
    r.method.kind = choice(m["kind"], "method.kind", kMethods);
    r.method.cutoff = static_cast<int>(integer(m["cutoff"], "method.cutoff"));
    if (r.method.cutoff < 1 || r.method.cutoff > 8) throw ConfigError("method.cutoff: expected 1..8");
    r.method.basis = choice(m["basis"], "method.basis",
                            std::map<std::string, BasisPolicy>{{"exact15", BasisPolicy::exact15},
                                                               {"lsq11", BasisPolicy::least_squares11}});
    r.method.force_zero = boolean(m["force_zero"], "method.force_zero");

    if (!g["extent"].is_array() || g["extent"].size() != 3)
        throw ConfigError("grid.extent: expected three unit-tagged lengths");
    std::array<double, 3> extent{};
    for (int a = 0; a < 3; ++a) {
        const std::string path = "grid.extent[" + std::to_string(a) + "]";
        // A collapsed axis has no extent; its coordinate is the center.
        extent[a] = r.grid.n[a] == 1 ? 1.0 : quantity(g["extent"][a], path, Dimension::length, ctx);
        if (!(extent[a] > 0)) throw ConfigError(path + ": must be positive");
    }
    Eigen::Vector3d center(r.harmonic.x_e, 0, 0);
    if (g.contains("center")) {
        if (!g["center"].is_array() || g["center"].size() != 3)
            throw ConfigError("grid.center: expected three unit-tagged lengths");
        for (int a = 0; a < 3; ++a)
            center[a] = quantity(g["center"][a], "grid.center[" + std::to_string(a) + "]", Dimension::length, ctx);
    }
    r.grid = centered_grid(r.grid.n, extent, center);

    const Json& pr = doc["propagation"];
    r.propagation.max_rel_error = number(pr["max_rel_error"], "propagation.max_rel_error");
    r.propagation.min_steps = static_cast<int>(integer(pr["min_steps"], "propagation.min_steps"));
    r.propagation.max_steps = integer(pr["max_steps"], "propagation.max_steps");
    r.propagation.adaptive = boolean(pr["adaptive"], "propagation.adaptive");
    if (pr.contains("dt_initial"))
        r.propagation.dt_initial = quantity(pr["dt_initial"], "propagation.dt_initial", Dimension::time, ctx);
    r.propagation.guard_threshold = number(pr["guard_threshold"], "propagation.guard_threshold");
    r.propagation.guard_action =
        choice(pr["guard_action"], "propagation.guard_action",
               std::map<std::string, GuardAction>{{"flag", GuardAction::flag}, {"abort", GuardAction::abort}});
    if (!(r.propagation.max_rel_error > 0)) throw ConfigError("propagation.max_rel_error: must be positive");
    if (r.propagation.min_steps < 1) throw ConfigError("propagation.min_steps: must be positive");

    const Json& it = doc["ite"];
    r.ite.tol_energy = number(it["tol_energy"], "ite.tol_energy");
    r.ite.final_ratio = number(it["final_ratio"], "ite.final_ratio");
    r.ite.max_iterations = integer(it["max_iterations"], "ite.max_iterations");
    r.ite_seed = choice(it["seed"], "ite.seed",
                        std::map<std::string, IteSeed>{{"harmonic", IteSeed::harmonic}, {"broad", IteSeed::broad}});
    if (it.contains("dtau")) r.ite.dtau = quantity(it["dtau"], "ite.dtau", Dimension::time, ctx);
    if (!(r.ite.tol_energy > 0)) throw ConfigError("ite.tol_energy: must be positive");
    if (!(r.ite.final_ratio > 0 && r.ite.final_ratio <= 1)) throw ConfigError("ite.final_ratio: expected (0, 1]");

    const Json& out = doc["output"];
    if (!out["snapshot_fractions"].is_array()) throw ConfigError("output.snapshot_fractions: expected an array");
    for (std::size_t i = 0; i < out["snapshot_fractions"].size(); ++i) {
        const double f = number(out["snapshot_fractions"][i], "output.snapshot_fractions[" + std::to_string(i) + "]");
        if (!(f > 0 && f < 1)) throw ConfigError("output.snapshot_fractions: values must lie in (0, 1)");
        if (!r.output.snapshot_fractions.empty() && !(f > r.output.snapshot_fractions.back()))
            throw ConfigError("output.snapshot_fractions: values must be strictly increasing");
        r.output.snapshot_fractions.push_back(f);
    }
    r.output.trajectory_rows = static_cast<int>(integer(out["trajectory_rows"], "output.trajectory_rows"));
    if (r.output.trajectory_rows < 2) throw ConfigError("output.trajectory_rows: need at least 2");
    const long seed = integer(doc["seed"], "seed");
    if (seed < 0) throw ConfigError("seed: must not be negative");
    r.seed = static_cast<std::uint64_t>(seed);
    if (doc.contains("sweep")) sweep_spec(doc);

    const HarmonicModel& h = r.harmonic;
    Json internal;
    internal["lattice"] = {{"u_d0", p.u_d0}, {"beta", p.beta},   {"theta", p.theta}, {"phi", p.phi},
                           {"xi_z", p.xi_z}, {"k_L", p.k_L},     {"k_z", p.k_z},     {"w0x", p.w0x},
                           {"w0y", p.w0y},   {"z_Rx", p.z_Rx},   {"z_Ry", p.z_Ry},   {"mass", p.mass}};
    internal["transport"] = {{"distance", r.transport.distance}, {"t_f", r.transport.t_f}};
    internal["grid"] = {{"n", r.grid.n}, {"extent", r.grid.extent}, {"origin", vec3(r.grid.origin)}};
    internal["propagation"] = {{"dt_initial", r.propagation.dt_initial}};
    internal["ite"] = {{"dtau", r.ite.dtau}};
    Json derived = {{"e_r", h.e_r},     {"v_d0", h.v_d0}, {"omega_x", h.omega_x}, {"omega_y", h.omega_y},
                    {"omega_z", h.omega_z}, {"a_x", h.a_x}, {"l_x", h.l_x},   {"l_y", h.l_y},
                    {"l_z", h.l_z},     {"t_x", h.t_x},   {"t_y", h.t_y},         {"x_e", h.x_e}};
    if (ctx.l_r) derived["l_r"] = *ctx.l_r;
    r.resolved = {{"unit_system", "hbar = m = k_L = 1"},
                  {"input", doc},
                  {"internal", internal},
                  {"derived", derived},
                  {"warnings", r.warnings}};
    return r;
}

std::optional<SweepSpec> sweep_spec(const Json& doc) {
    if (!doc.contains("sweep")) return std::nullopt;
    const Json& s = doc["sweep"];
    SweepSpec spec;
    spec.variable = text(at(s, "variable", "sweep"), "sweep.variable");
    static const std::set<std::string> sweepable{
        "lattice.depth",      "lattice.beta",       "lattice.theta",        "lattice.phi",   "lattice.waist_x",
        "lattice.waist_y",    "transport.distance", "transport.t_f"};
    if (!sweepable.count(spec.variable)) throw ConfigError("sweep.variable: '" + spec.variable + "' cannot be swept");
    if (s.contains("values")) {
        if (s.contains("from") || s.contains("to") || s.contains("count"))
            throw ConfigError("sweep: give either values or from/to/count");
        if (!s["values"].is_array() || s["values"].empty()) throw ConfigError("sweep.values: expected a non-empty array");
        for (std::size_t i = 0; i < s["values"].size(); ++i)
            spec.values.push_back(text(s["values"][i], "sweep.values[" + std::to_string(i) + "]"));
        // Rows are reported in ascending order, which needs one common unit.
        const std::string unit = split_quantity(spec.values.front()).unit;
        for (const std::string& v : spec.values)
            if (split_quantity(v).unit != unit) throw ConfigError("sweep.values: all values must use the same unit");
        std::stable_sort(spec.values.begin(), spec.values.end(), [](const std::string& a, const std::string& b) {
            return split_quantity(a).number < split_quantity(b).number;
        });
    } else {
        const Quantity from = split_quantity(text(at(s, "from", "sweep"), "sweep.from"));
        const Quantity to = split_quantity(text(at(s, "to", "sweep"), "sweep.to"));
        const long count = integer(at(s, "count", "sweep"), "sweep.count");
        if (from.unit != to.unit) throw ConfigError("sweep: from and to must use the same unit");
        if (count < 1) throw ConfigError("sweep.count: must be positive");
        for (long i = 0; i < count; ++i) {
            const double v = count == 1 ? from.number : from.number + (to.number - from.number) * i / (count - 1);
            std::ostringstream os;
            os.precision(15);
            os << v << ' ' << from.unit;
            spec.values.push_back(os.str());
        }
    }
    if (s.contains("methods")) {
        spec.methods.clear();
        if (!s["methods"].is_array() || s["methods"].empty())
            throw ConfigError("sweep.methods: expected a non-empty array");
        for (std::size_t i = 0; i < s["methods"].size(); ++i)
            spec.methods.push_back(choice(s["methods"][i], "sweep.methods[" + std::to_string(i) + "]", kMethods));
    }
    return spec;
}

Json with_value(Json doc, const std::string& path, const std::string& value) {
    Json* node = &doc;
    std::size_t start = 0;
    while (true) {
        const std::size_t dot = path.find('.', start);
        const std::string key = path.substr(start, dot == std::string::npos ? std::string::npos : dot - start);
        if (dot == std::string::npos) {
            (*node)[key] = value;
            return doc;
        }
        node = &(*node)[key];
        start = dot + 1;
    }
}

}  // namespace dwol::harness
