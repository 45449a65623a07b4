#include "config.hpp"

#include <fstream>
#include <set>

#include <json.hpp>

namespace nasolv::cli {

using nlohmann::json;

GroupModel Config::model() const {
    try {
        return GroupModel::parse(group);
    } catch (const std::invalid_argument& e) {
        throw ConfigError(e.what());
    }
}

Window Config::window() const {
    const GroupModel m = model();
    Window w;
    w.lo = NPoint(m.d);
    w.hi = NPoint(m.d);
    for (int i = 0; i < m.d; ++i) {
        w.lo[i] = zLo;
        w.hi[i] = zHi;
    }
    w.uLo = uLo;
    w.uHi = uHi;
    return w;
}

AdmissibilityConstants Config::constants() const { return make_constants(M, r0, eta, model().Q, Cstar); }

namespace {

template <class T>
void read(const json& j, const char* key, T& dst) {
    if (!j.contains(key)) return;
    try {
        dst = j.at(key).get<T>();
    } catch (const json::exception& e) {
        throw ConfigError(std::string("config key ") + key + ": " + e.what());
    }
}

}  // namespace

Config load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config " + path);
    json j;
    try {
        j = json::parse(in);
    } catch (const json::parse_error& e) {
        throw ConfigError("config " + path + ": " + e.what());
    }
    if (!j.is_object()) throw ConfigError("config must be a JSON object");
    static const std::set<std::string> known = {
        "group", "M", "r0", "eta", "Cstar", "zLo", "zHi", "uLo", "uHi", "czFunctions", "czAlphaFactors",
        "dyadicKMin", "dyadicKMax", "dyadicPerSide", "tol", "tGrid", "mcSamples", "seed", "out"};
    for (auto it = j.begin(); it != j.end(); ++it)
        if (!known.count(it.key())) throw ConfigError("unknown config key " + it.key());
    Config c;
    read(j, "group", c.group);
    read(j, "M", c.M);
    read(j, "r0", c.r0);
    read(j, "eta", c.eta);
    read(j, "Cstar", c.Cstar);
    read(j, "zLo", c.zLo);
    read(j, "zHi", c.zHi);
    read(j, "uLo", c.uLo);
    read(j, "uHi", c.uHi);
    read(j, "czFunctions", c.czFunctions);
    read(j, "czAlphaFactors", c.czAlphaFactors);
    read(j, "dyadicKMin", c.dyadicKMin);
    read(j, "dyadicKMax", c.dyadicKMax);
    read(j, "dyadicPerSide", c.dyadicPerSide);
    read(j, "tol", c.tol);
    read(j, "tGrid", c.tGrid);
    read(j, "mcSamples", c.mcSamples);
    read(j, "seed", c.seed);
    read(j, "out", c.out);
    validate(c);
    return c;
}

void validate(const Config& c) {
    c.model();
    if (!(c.zHi > c.zLo) || !(c.uHi > c.uLo)) throw ConfigError("empty CZ window");
    if (!(c.tol > 0.0)) throw ConfigError("tol must be positive");
    if (c.czFunctions < 0 || c.mcSamples <= 0) throw ConfigError("sample counts must be positive");
    if (c.dyadicKMin > c.dyadicKMax || c.dyadicPerSide < 1) throw ConfigError("bad dyadic levels");
    for (double t : c.tGrid)
        if (!(t > 0.0)) throw ConfigError("t-grid entries must be positive");
    for (double a : c.czAlphaFactors)
        if (!(a > 0.0)) throw ConfigError("alpha factors must be positive");
}

}  // namespace nasolv::cli
