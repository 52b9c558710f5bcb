#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "dwol/esta.hpp"
#include "dwol/experiment.hpp"
#include "dwol/harness/units.hpp"

namespace dwol::harness {

using Json = nlohmann::ordered_json;

struct MethodSpec {
    Provenance kind = Provenance::STA;
    int cutoff = 2;
    BasisPolicy basis = BasisPolicy::exact15;
    bool force_zero = false;
};

struct SweepSpec {
    std::string variable;             // dotted config path, e.g. "transport.t_f"
    std::vector<std::string> values;  // unit-tagged values substituted at that path
    std::vector<Provenance> methods{Provenance::STA, Provenance::ESTA};
};

struct OutputSpec {
    std::vector<double> snapshot_fractions;
    int trajectory_rows = 201;
};

// One fully resolved experiment in internal units.
struct ResolvedRun {
    LatticeParams lattice;
    HarmonicModel harmonic;
    PotentialModel model = PotentialModel::full;
    TransportSpec transport;
    MethodSpec method;
    GridSpec grid;
    PropagationConfig propagation;
    IteConfig ite;
    IteSeed ite_seed = IteSeed::harmonic;
    OutputSpec output;
    std::uint64_t seed = 1;
    UnitContext units;
    std::vector<std::string> warnings;
    Json resolved;  // echo of the input with defaults, plus internal values and derived scales

    bool planar() const { return grid.n[2] == 1; }
    EstaOptions esta_options() const;
    TransportSetup setup() const;
};

// Parsed text of a configuration file with line/column on syntax errors.
Json load_config(const std::string& path);
Json parse_config_text(const std::string& text);

// Rejects unknown keys anywhere in the document (reported by path).
void check_schema(const Json& doc);

ResolvedRun resolve(const Json& doc);

std::optional<SweepSpec> sweep_spec(const Json& doc);

// Copy of doc with the value at a dotted path replaced.
Json with_value(Json doc, const std::string& path, const std::string& value);

}  // namespace dwol::harness
