#pragma once

#include <array>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "fvsolid/core.hpp"
#include "fvsolid/fields.hpp"
#include "fvsolid/material.hpp"
#include "fvsolid/mesh.hpp"
#include "fvsolid/mesh_io.hpp"
#include "fvsolid/solver.hpp"

namespace fvsolid {

/// Complete description of a case: material, time controls, solver
/// controls, boundary conditions, body force and mesh source. Parsed from a
/// flat `section.key = value` text file; unknown keys are rejected.
struct CaseConfig {
    LinearElasticMaterial material;

    bool steady = true;
    double dt = 0.0;
    double endTime = 0.0;
    int writeInterval = 1;

    SolverControls controls;

    std::vector<BoundaryConditionSpec> boundaries;
    Vec3 bodyForce;

    std::string meshFile;  // empty when the block generator is used
    bool hasBlockMesh = false;
    Vec3 blockOrigin;
    Vec3 blockExtent;
    std::array<int, 3> blockDivisions{1, 1, 1};

    std::string caseDir;
};

namespace detail {

struct ConfigEntry {
    std::string value;
    int line = 0;
    bool used = false;
};

class ConfigMap {
public:
    ConfigMap(std::istream& in, std::string source) : source_(std::move(source)) {
        std::string line;
        int lineNo = 0;
        while (std::getline(in, line)) {
            ++lineNo;
            const auto hash = line.find('#');
            if (hash != std::string::npos) line.erase(hash);
            const auto first = line.find_first_not_of(" \t\r");
            if (first == std::string::npos) continue;
            const auto eq = line.find('=');
            if (eq == std::string::npos)
                fail(lineNo, "expected 'key = value'");
            std::string key = trim(line.substr(0, eq));
            std::string value = trim(line.substr(eq + 1));
            if (key.empty()) fail(lineNo, "empty key");
            if (entries_.count(key))
                fail(lineNo, "duplicate key '" + key + "' (first at line " +
                                 std::to_string(entries_[key].line) + ")");
            entries_[key] = {value, lineNo, false};
        }
    }

    bool has(const std::string& key) const { return entries_.count(key) != 0; }

    const ConfigEntry* find(const std::string& key) {
        auto it = entries_.find(key);
        if (it == entries_.end()) return nullptr;
        it->second.used = true;
        return &it->second;
    }

    std::string requireString(const std::string& key) {
        const auto* e = find(key);
        if (!e) throw ParseError(source_ + ": missing required key '" + key + "'");
        return e->value;
    }

    double getDouble(const std::string& key, const ConfigEntry& e) const {
        try {
            std::size_t used = 0;
            const double v = std::stod(e.value, &used);
            if (used != e.value.size()) throw std::invalid_argument("");
            return v;
        } catch (const std::exception&) {
            fail(e.line, "key '" + key + "': expected a number, got '" + e.value + "'");
        }
    }

    double requireDouble(const std::string& key) {
        const auto* e = find(key);
        if (!e) throw ParseError(source_ + ": missing required key '" + key + "'");
        return getDouble(key, *e);
    }

    bool optionalDouble(const std::string& key, double& out) {
        const auto* e = find(key);
        if (!e) return false;
        out = getDouble(key, *e);
        return true;
    }

    bool optionalInt(const std::string& key, int& out) {
        const auto* e = find(key);
        if (!e) return false;
        try {
            std::size_t used = 0;
            out = std::stoi(e->value, &used);
            if (used != e->value.size()) throw std::invalid_argument("");
        } catch (const std::exception&) {
            fail(e->line, "key '" + key + "': expected an integer, got '" + e->value + "'");
        }
        return true;
    }

    bool optionalBool(const std::string& key, bool& out) {
        const auto* e = find(key);
        if (!e) return false;
        if (e->value == "true")
            out = true;
        else if (e->value == "false")
            out = false;
        else
            fail(e->line, "key '" + key + "': expected true or false, got '" + e->value + "'");
        return true;
    }

    bool optionalVec3(const std::string& key, Vec3& out) {
        const auto* e = find(key);
        if (!e) return false;
        out = parseVec3(key, *e);
        return true;
    }

    Vec3 requireVec3(const std::string& key) {
        const auto* e = find(key);
        if (!e) throw ParseError(source_ + ": missing required key '" + key + "'");
        return parseVec3(key, *e);
    }

    bool optionalInt3(const std::string& key, std::array<int, 3>& out) {
        const auto* e = find(key);
        if (!e) return false;
        std::istringstream ss(e->value);
        if (!(ss >> out[0] >> out[1] >> out[2]) || !(ss >> std::ws).eof())
            fail(e->line, "key '" + key + "': expected three integers, got '" + e->value + "'");
        return true;
    }

    /// Keys in file order whose first segments match the given prefix.
    std::vector<std::string> keysWithPrefix(const std::string& prefix) const {
        std::vector<std::pair<int, std::string>> found;
        for (const auto& [key, entry] : entries_)
            if (key.rfind(prefix, 0) == 0) found.push_back({entry.line, key});
        std::sort(found.begin(), found.end());
        std::vector<std::string> keys;
        for (auto& [line, key] : found) keys.push_back(std::move(key));
        return keys;
    }

    void rejectUnused() const {
        for (const auto& [key, entry] : entries_)
            if (!entry.used)
                fail(entry.line, "unknown key '" + key + "'");
    }

    [[noreturn]] void fail(int line, const std::string& msg) const {
        throw ParseError(source_ + ":" + std::to_string(line) + ": " + msg);
    }

private:
    static std::string trim(std::string s) {
        const auto first = s.find_first_not_of(" \t\r");
        const auto last = s.find_last_not_of(" \t\r");
        if (first == std::string::npos) return "";
        return s.substr(first, last - first + 1);
    }

    Vec3 parseVec3(const std::string& key, const ConfigEntry& e) const {
        std::istringstream ss(e.value);
        Vec3 v;
        if (!(ss >> v.x >> v.y >> v.z) || !(ss >> std::ws).eof())
            fail(e.line, "key '" + key + "': expected three numbers, got '" + e.value + "'");
        return v;
    }

    std::map<std::string, ConfigEntry> entries_;
    std::string source_;
};

}  // namespace detail

inline CaseConfig parseCaseConfig(std::istream& in, const std::string& source) {
    detail::ConfigMap map(in, source);
    CaseConfig cfg;

    // material: E/nu or mu/lambda, not both
    {
        const bool hasYoung = map.has("material.E") || map.has("material.nu");
        const bool hasLame = map.has("material.mu") || map.has("material.lambda");
        if (hasYoung && hasLame)
            throw ParseError(source + ": give either material.E/material.nu or material.mu/material.lambda, not both");
        double rho = 1.0;
        map.optionalDouble("material.rho", rho);
        try {
            if (hasLame) {
                const double mu = map.requireDouble("material.mu");
                const double lambda = map.requireDouble("material.lambda");
                cfg.material = LinearElasticMaterial::fromLame(mu, lambda, rho);
            } else {
                const double e = map.requireDouble("material.E");
                const double nu = map.requireDouble("material.nu");
                cfg.material = LinearElasticMaterial::fromYoungPoisson(e, nu, rho);
            }
        } catch (const InvalidArgumentError& err) {
            throw ParseError(source + ": " + err.what());
        }
    }

    map.optionalBool("time.steady", cfg.steady);
    if (!cfg.steady) {
        cfg.dt = map.requireDouble("time.dt");
        cfg.endTime = map.requireDouble("time.endTime");
        if (!(cfg.dt > 0.0)) throw ParseError(source + ": time.dt must be positive");
        if (!(cfg.endTime > 0.0)) throw ParseError(source + ": time.endTime must be positive");
        if (!map.has("material.rho"))
            throw ParseError(source + ": dynamic cases require material.rho");
    } else {
        double ignored;
        map.optionalDouble("time.dt", ignored);
        map.optionalDouble("time.endTime", ignored);
    }
    map.optionalInt("time.writeInterval", cfg.writeInterval);
    if (cfg.writeInterval < 1) throw ParseError(source + ": time.writeInterval must be >= 1");

    map.optionalDouble("solver.outerTolerance", cfg.controls.outerTolerance);
    map.optionalInt("solver.maxOuterIterations", cfg.controls.maxOuterIterations);
    map.optionalDouble("solver.innerRelTol", cfg.controls.innerRelTol);
    map.optionalInt("solver.innerMaxIterations", cfg.controls.innerMaxIterations);
    map.optionalDouble("solver.relaxationFactor", cfg.controls.relaxationFactor);
    if (const auto* e = map.find("solver.preconditioner")) {
        if (e->value == "jacobi")
            cfg.controls.preconditioner = Preconditioner::jacobi;
        else if (e->value == "incompleteCholesky")
            cfg.controls.preconditioner = Preconditioner::incompleteCholesky;
        else
            map.fail(e->line, "solver.preconditioner: expected jacobi or incompleteCholesky");
    }
    if (const auto* e = map.find("solver.gradientWeighting")) {
        if (e->value == "unity")
            cfg.controls.gradientWeighting = GradientWeighting::unity;
        else if (e->value == "inverseDistance")
            cfg.controls.gradientWeighting = GradientWeighting::inverseDistance;
        else
            map.fail(e->line, "solver.gradientWeighting: expected unity or inverseDistance");
    }
    try {
        cfg.controls.validate();
    } catch (const InvalidArgumentError& err) {
        throw ParseError(source + ": " + err.what());
    }

    map.optionalVec3("bodyForce.value", cfg.bodyForce);

    // mesh source: a file or the block generator
    if (const auto* e = map.find("mesh.file")) cfg.meshFile = e->value;
    const bool hasBlock = map.has("mesh.blockOrigin") || map.has("mesh.blockExtent") ||
                          map.has("mesh.blockDivisions");
    if (!cfg.meshFile.empty() && hasBlock)
        throw ParseError(source + ": give either mesh.file or mesh.block*, not both");
    if (cfg.meshFile.empty() && !hasBlock)
        throw ParseError(source + ": missing mesh source (mesh.file or mesh.block*)");
    if (hasBlock) {
        cfg.hasBlockMesh = true;
        map.optionalVec3("mesh.blockOrigin", cfg.blockOrigin);
        cfg.blockExtent = map.requireVec3("mesh.blockExtent");
        if (!map.optionalInt3("mesh.blockDivisions", cfg.blockDivisions))
            throw ParseError(source + ": missing required key 'mesh.blockDivisions'");
    }

    // boundary.<patch>.kind / boundary.<patch>.value
    for (const auto& key : map.keysWithPrefix("boundary.")) {
        const auto tail = key.substr(std::string("boundary.").size());
        const auto dotPos = tail.rfind('.');
        if (dotPos == std::string::npos || (tail.substr(dotPos + 1) != "kind"))
            continue;  // values are picked up with their kind below
        const std::string patch = tail.substr(0, dotPos);
        const auto* kindEntry = map.find(key);
        const auto kind = patchKindFromString(kindEntry->value);
        if (!kind)
            map.fail(kindEntry->line, "key '" + key + "': unknown boundary kind '" +
                                          kindEntry->value + "'");
        BoundaryConditionSpec spec;
        spec.patch = patch;
        spec.kind = *kind;
        const std::string valueKey = "boundary." + patch + ".value";
        if (spec.kind == PatchKind::symmetry) {
            if (map.has(valueKey)) {
                const auto* v = map.find(valueKey);
                map.fail(v->line, "symmetry patch '" + patch + "' must not carry a value");
            }
        } else {
            spec.value = map.requireVec3(valueKey);
        }
        cfg.boundaries.push_back(std::move(spec));
    }

    map.rejectUnused();
    return cfg;
}

inline CaseConfig parseCaseConfig(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError(path + ": cannot open config file");
    CaseConfig cfg = parseCaseConfig(in, path);
    const auto slash = path.find_last_of('/');
    cfg.caseDir = slash == std::string::npos ? std::string(".") : path.substr(0, slash);
    return cfg;
}

/// Loads the configured mesh (file or block generator) and re-types its
/// patches from the boundary specs. Unknown patch names or uncovered
/// patches surface later through expandBoundaryConditions.
inline PolyMesh loadCaseMesh(const CaseConfig& cfg) {
    PolyMesh mesh;
    if (!cfg.meshFile.empty())
        mesh = readMesh(cfg.caseDir.empty() ? cfg.meshFile : cfg.caseDir + "/" + cfg.meshFile);
    else
        mesh = buildBlockMesh(cfg.blockOrigin, cfg.blockExtent, cfg.blockDivisions);
    for (const auto& spec : cfg.boundaries)
        for (auto& patch : mesh.patches)
            if (patch.name == spec.patch) patch.kind = spec.kind;
    return mesh;
}

}  // namespace fvsolid
