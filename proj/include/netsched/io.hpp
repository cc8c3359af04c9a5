/*
 Copyright 2026 The netsched Authors

 Licensed under the Apache License, Version 2.0 (the "License");
 you may not use this file except in compliance with the License.
 You may obtain a copy of the License at

      https://www.apache.org/licenses/LICENSE-2.0

 Unless required by applicable law or agreed to in writing, software
 distributed under the License is distributed on an "AS IS" BASIS,
 WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 See the License for the specific language governing permissions and
 limitations under the License.
*/
#ifndef NETSCHED_IO_HPP
#define NETSCHED_IO_HPP

/**
 * @file io.hpp
 * @brief JSON run configuration and result documents.
 *
 * Layout of a run configuration (every key except "plants" and "capacity" is optional):
 *
 *     {
 *       "capacity": 1,
 *       "plants": [ {"index": 1, "A": [[...]], "B": [[...]], "K": [[...]]} ],
 *       "schedule": {"blocks": [[1], [2]], "probabilities": ["1/2", "1/2"]},
 *       "certificates": [ {"plant": 1, "p": "1/2", "kappa": 1e-8, "P_s": [[...]], "P_u": [[...]]} ],
 *       "solver": {"kappa": 1e-8, "h": "1/10"},
 *       "simulation": {"horizon": 1000, "trials": 1000, "seed": 1},
 *       "output": "out"
 *     }
 *
 * Matrices are row-major arrays of rows. Probabilities and h are strings holding
 * exact rationals ("1/2", "0.25"); bare JSON numbers are rejected there.
 */

#include "netsched/certify.hpp"
#include "netsched/model.hpp"
#include "netsched/partition.hpp"
#include "netsched/rational.hpp"
#include "netsched/search.hpp"
#include "netsched/synthesis.hpp"

#include <json.hpp>

#include <algorithm>
#include <cstdint>
#include <fstream>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace netsched {

using Json = nlohmann::ordered_json;

/// Schema or syntax problem in a configuration document; `where()` is a JSON pointer or "line:col".
class ConfigError : public std::runtime_error {
public:
    ConfigError(std::string where, const std::string& what)
        : std::runtime_error(where.empty() ? what : where + ": " + what), where_(std::move(where)) {}
    [[nodiscard]] const std::string& where() const noexcept { return where_; }

private:
    std::string where_;
};

struct SolverOptions {
    double kappa = kDefaultKappa;
    Rational h{1, 10};

    bool operator==(const SolverOptions&) const = default;
};

struct SimulationOptions {
    std::int64_t horizon = 1000;
    std::int64_t trials = 1000;
    std::uint64_t seed = 1;

    bool operator==(const SimulationOptions&) const = default;
};

struct CertificateEntry {
    int plant = 0;
    StabilityCertificate certificate;
};

struct RunConfig {
    NcsConfig ncs;
    std::optional<ScheduleParameters> schedule;
    std::vector<CertificateEntry> certificates;
    SolverOptions solver;
    SimulationOptions simulation;
    std::string output = "out";
};

// ---------------------------------------------------------------------------
// Encoding

inline Json matrix_to_json(const Matrix& m) {
    Json rows = Json::array();
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        Json row = Json::array();
        for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
        rows.push_back(std::move(row));
    }
    return rows;
}

inline Json schedule_to_json(const ScheduleParameters& params) {
    Json probs = Json::array();
    for (const auto& q : params.probabilities.values) probs.push_back(q.str());
    return Json{{"blocks", params.partition.blocks}, {"probabilities", probs}};
}

inline Json certificate_to_json(int plant, const StabilityCertificate& cert) {
    return Json{{"plant", plant},
                {"p", cert.p.str()},
                {"kappa", cert.kappa},
                {"P_s", matrix_to_json(cert.P_s)},
                {"P_u", matrix_to_json(cert.P_u)}};
}

inline Json plant_to_json(const PlantModel& plant) {
    Json j{{"index", plant.index}, {"A", matrix_to_json(plant.A)}, {"B", matrix_to_json(plant.B)}};
    if (plant.K) j["K"] = matrix_to_json(*plant.K);
    return j;
}

inline Json to_json(const RunConfig& cfg) {
    Json plants = Json::array();
    for (const auto& p : cfg.ncs.plants) plants.push_back(plant_to_json(p));
    Json j{{"capacity", cfg.ncs.capacity}, {"plants", plants}};
    if (cfg.schedule) j["schedule"] = schedule_to_json(*cfg.schedule);
    if (!cfg.certificates.empty()) {
        Json certs = Json::array();
        for (const auto& c : cfg.certificates) certs.push_back(certificate_to_json(c.plant, c.certificate));
        j["certificates"] = certs;
    }
    j["solver"] = Json{{"kappa", cfg.solver.kappa}, {"h", cfg.solver.h.str()}};
    j["simulation"] = Json{{"horizon", cfg.simulation.horizon},
                           {"trials", cfg.simulation.trials},
                           {"seed", cfg.simulation.seed}};
    j["output"] = cfg.output;
    return j;
}

inline std::string serialize(const RunConfig& cfg) { return to_json(cfg).dump(2) + "\n"; }

// ---------------------------------------------------------------------------
// Decoding

namespace detail {

inline std::string child(const std::string& path, const std::string& key) { return path + "/" + key; }
inline std::string child(const std::string& path, std::size_t i) { return path + "/" + std::to_string(i); }

inline const Json& require_key(const Json& obj, const std::string& key, const std::string& path) {
    if (!obj.is_object()) throw ConfigError(path.empty() ? "/" : path, "expected an object");
    auto it = obj.find(key);
    if (it == obj.end()) throw ConfigError(child(path, key), "missing required field");
    return *it;
}

inline const Json* optional_key(const Json& obj, const std::string& key) {
    auto it = obj.find(key);
    return it == obj.end() || it->is_null() ? nullptr : &*it;
}

inline std::int64_t read_int(const Json& j, const std::string& path) {
    if (!j.is_number_integer()) throw ConfigError(path, "expected an integer");
    return j.get<std::int64_t>();
}

inline double read_double(const Json& j, const std::string& path) {
    if (!j.is_number()) throw ConfigError(path, "expected a number");
    return j.get<double>();
}

inline Rational read_rational(const Json& j, const std::string& path) {
    if (!j.is_string()) throw ConfigError(path, "expected a rational string such as \"1/2\"");
    try {
        return Rational::parse(j.get<std::string>());
    } catch (const std::exception& e) {
        throw ConfigError(path, std::string("not a rational: ") + e.what());
    }
}

inline Matrix read_matrix(const Json& j, const std::string& path) {
    if (!j.is_array() || j.empty()) throw ConfigError(path, "expected a non-empty array of rows");
    const std::size_t cols = j.front().is_array() ? j.front().size() : 0;
    if (cols == 0) throw ConfigError(child(path, 0), "expected a non-empty row");
    Matrix m(static_cast<Eigen::Index>(j.size()), static_cast<Eigen::Index>(cols));
    for (std::size_t r = 0; r < j.size(); ++r) {
        const auto& row = j[r];
        if (!row.is_array() || row.size() != cols) throw ConfigError(child(path, r), "rows must have equal length");
        for (std::size_t c = 0; c < cols; ++c) {
            const auto& x = row[c];
            if (!x.is_number()) throw ConfigError(child(child(path, r), c), "expected a number");
            m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = x.get<double>();
        }
    }
    return m;
}

inline ScheduleParameters read_schedule(const Json& j, const std::string& path) {
    ScheduleParameters params;
    const auto& blocks = require_key(j, "blocks", path);
    if (!blocks.is_array()) throw ConfigError(child(path, "blocks"), "expected an array of blocks");
    for (std::size_t b = 0; b < blocks.size(); ++b) {
        const auto bp = child(child(path, "blocks"), b);
        if (!blocks[b].is_array()) throw ConfigError(bp, "expected an array of plant indices");
        std::vector<int> members;
        for (std::size_t k = 0; k < blocks[b].size(); ++k)
            members.push_back(static_cast<int>(read_int(blocks[b][k], child(bp, k))));
        params.partition.blocks.push_back(std::move(members));
    }
    const auto& probs = require_key(j, "probabilities", path);
    if (!probs.is_array()) throw ConfigError(child(path, "probabilities"), "expected an array of rationals");
    for (std::size_t k = 0; k < probs.size(); ++k)
        params.probabilities.values.push_back(read_rational(probs[k], child(child(path, "probabilities"), k)));
    return params;
}

}  // namespace detail

/**
 * Decodes and validates a configuration. Structural problems are reported
 * with the JSON pointer of the offending field; model-level problems (shapes,
 * capacity, partition invariants) are reported against the enclosing object.
 */
inline RunConfig from_json(const Json& root) {
    using namespace detail;
    RunConfig cfg;
    if (!root.is_object()) throw ConfigError("/", "configuration must be a JSON object");

    cfg.ncs.capacity = static_cast<int>(read_int(require_key(root, "capacity", ""), "/capacity"));
    const auto& plants = require_key(root, "plants", "");
    if (!plants.is_array()) throw ConfigError("/plants", "expected an array");
    for (std::size_t i = 0; i < plants.size(); ++i) {
        const auto path = child("/plants", i);
        PlantModel p;
        p.index = static_cast<int>(read_int(require_key(plants[i], "index", path), child(path, "index")));
        p.A = read_matrix(require_key(plants[i], "A", path), child(path, "A"));
        p.B = read_matrix(require_key(plants[i], "B", path), child(path, "B"));
        if (const Json* k = optional_key(plants[i], "K")) p.K = read_matrix(*k, child(path, "K"));
        try {
            p.validate();
        } catch (const std::exception& e) {
            throw ConfigError(path, e.what());
        }
        cfg.ncs.plants.push_back(std::move(p));
    }
    std::sort(cfg.ncs.plants.begin(), cfg.ncs.plants.end(),
              [](const PlantModel& a, const PlantModel& b) { return a.index < b.index; });
    try {
        cfg.ncs.validate();
    } catch (const std::exception& e) {
        throw ConfigError("/", e.what());
    }

    if (const Json* s = optional_key(root, "schedule")) {
        auto params = read_schedule(*s, "/schedule");
        try {
            params.validate(cfg.ncs.size(), cfg.ncs.capacity);
        } catch (const std::exception& e) {
            throw ConfigError("/schedule", e.what());
        }
        cfg.schedule = std::move(params);
    }

    if (const Json* certs = optional_key(root, "certificates")) {
        if (!certs->is_array()) throw ConfigError("/certificates", "expected an array");
        for (std::size_t i = 0; i < certs->size(); ++i) {
            const auto path = child("/certificates", i);
            const auto& c = (*certs)[i];
            CertificateEntry e;
            e.plant = static_cast<int>(read_int(require_key(c, "plant", path), child(path, "plant")));
            if (e.plant < 1 || e.plant > cfg.ncs.size()) throw ConfigError(child(path, "plant"), "unknown plant index");
            e.certificate.p = read_rational(require_key(c, "p", path), child(path, "p"));
            if (const Json* k = optional_key(c, "kappa")) e.certificate.kappa = read_double(*k, child(path, "kappa"));
            e.certificate.P_s = read_matrix(require_key(c, "P_s", path), child(path, "P_s"));
            e.certificate.P_u = read_matrix(require_key(c, "P_u", path), child(path, "P_u"));
            cfg.certificates.push_back(std::move(e));
        }
    }

    if (const Json* s = optional_key(root, "solver")) {
        if (const Json* k = optional_key(*s, "kappa")) cfg.solver.kappa = read_double(*k, "/solver/kappa");
        if (const Json* h = optional_key(*s, "h")) cfg.solver.h = read_rational(*h, "/solver/h");
        if (!(cfg.solver.kappa > 0.0 && cfg.solver.kappa < 1.0)) throw ConfigError("/solver/kappa", "must lie in ]0,1[");
        if (cfg.solver.h.num() <= 0 || cfg.solver.h >= Rational(1))
            throw ConfigError("/solver/h", "must lie in ]0,1[");
    }

    if (const Json* s = optional_key(root, "simulation")) {
        if (const Json* t = optional_key(*s, "horizon")) cfg.simulation.horizon = read_int(*t, "/simulation/horizon");
        if (const Json* t = optional_key(*s, "trials")) cfg.simulation.trials = read_int(*t, "/simulation/trials");
        if (const Json* t = optional_key(*s, "seed")) {
            if (!t->is_number_unsigned() && !t->is_number_integer()) throw ConfigError("/simulation/seed", "expected an integer");
            if (t->is_number_integer() && t->get<std::int64_t>() < 0) throw ConfigError("/simulation/seed", "must be >= 0");
            cfg.simulation.seed = t->get<std::uint64_t>();
        }
        if (cfg.simulation.horizon < 1) throw ConfigError("/simulation/horizon", "must be >= 1");
        if (cfg.simulation.trials < 1) throw ConfigError("/simulation/trials", "must be >= 1");
    }

    if (const Json* o = optional_key(root, "output")) {
        if (!o->is_string()) throw ConfigError("/output", "expected a string");
        cfg.output = o->get<std::string>();
    }
    return cfg;
}

/// Parses JSON text; syntax errors carry "line:col" of the failure.
inline RunConfig parse_config(const std::string& text) {
    Json root;
    try {
        root = Json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        // Convert the byte offset into line:column.
        std::size_t line = 1, col = 1;
        for (std::size_t i = 0; i + 1 < e.byte && i < text.size(); ++i) {
            if (text[i] == '\n') {
                ++line;
                col = 1;
            } else {
                ++col;
            }
        }
        throw ConfigError(std::to_string(line) + ":" + std::to_string(col), "JSON syntax error");
    }
    return from_json(root);
}

inline RunConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open config file " + path);
    std::stringstream buf;
    buf << in.rdbuf();
    try {
        return parse_config(buf.str());
    } catch (const ConfigError& e) {
        throw ConfigError(path + ":" + e.where(), std::string(e.what()).substr(e.where().size() + 2));
    }
}

// ---------------------------------------------------------------------------
// Result documents

inline Json verification_to_json(int plant, const VerificationReport& rep) {
    Json j{{"plant", plant}, {"ok", rep.ok}, {"diagnostics", rep.diagnostics}, {"tolerance", rep.tolerance}};
    if (rep.residuals) {
        j["residuals"] = Json{{"R_s", matrix_to_json(rep.residuals->R_s)},
                              {"R_u", matrix_to_json(rep.residuals->R_u)},
                              {"max_eigenvalue_s", rep.residuals->margin_s},
                              {"max_eigenvalue_u", rep.residuals->margin_u}};
    }
    return j;
}

inline Json synthesis_to_json(const PlantSynthesis& s) {
    Json j{{"plant", s.index}, {"p", s.p.str()}, {"ok", s.ok()}};
    if (!s.failure.empty()) j["failure"] = s.failure;
    if (!s.open_loop_method.empty()) j["open_loop_method"] = s.open_loop_method;
    if (s.K) j["K"] = matrix_to_json(*s.K);
    if (s.Y) j["Y"] = matrix_to_json(*s.Y);
    if (s.certificate) j["certificate"] = certificate_to_json(s.index, *s.certificate);
    return j;
}

inline Json search_to_json(const SearchOutcome& outcome) {
    Json j{{"status", to_string(outcome.status)},
           {"multisets_examined", outcome.multisets_examined},
           {"evaluations", outcome.evaluations}};
    if (outcome.result) {
        j["schedule"] = schedule_to_json(outcome.result->params);
        Json ev = Json::array();
        for (std::size_t i = 0; i < outcome.result->evidence.size(); ++i) {
            const auto& e = outcome.result->evidence[i];
            Json item = certificate_to_json(static_cast<int>(i) + 1, e.certificate);
            if (e.gain) item["K"] = matrix_to_json(*e.gain);
            ev.push_back(std::move(item));
        }
        j["certificates"] = ev;
    }
    return j;
}

}  // namespace netsched

#endif  // NETSCHED_IO_HPP
