#pragma once

#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>

#include <json.hpp>

#include "cascade/game.hpp"

namespace cascade {

// Game documents are JSON with the fields
//   u_size, v_size, w1_size?, w2_size?, prior, cost1, cost2, cost3, r1, r2
// costs row-major with row = source-symbol index. Auxiliary sizes default
// to u_size. Validation errors name the offending field.

inline GameSpec load_spec(const std::string& text) {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw std::invalid_argument(std::string("spec document: ") + e.what());
    }
    if (!doc.is_object()) throw std::invalid_argument("spec document: top level must be an object");

    auto require = [&](const char* key) -> const nlohmann::json& {
        auto it = doc.find(key);
        if (it == doc.end()) throw std::invalid_argument(std::string(key) + ": missing field");
        return *it;
    };
    auto as_size = [&](const nlohmann::json& j, const char* key) -> std::size_t {
        if (!j.is_number_unsigned() && !j.is_number_integer())
            throw std::invalid_argument(std::string(key) + ": must be an integer");
        long long v = j.get<long long>();
        if (v < 0) throw std::invalid_argument(std::string(key) + ": must be nonnegative");
        return static_cast<std::size_t>(v);
    };
    auto as_vector = [&](const nlohmann::json& j, const char* key) {
        if (!j.is_array()) throw std::invalid_argument(std::string(key) + ": must be an array");
        std::vector<double> out;
        for (const auto& x : j) {
            if (!x.is_number()) throw std::invalid_argument(std::string(key) + ": entries must be numbers");
            out.push_back(x.get<double>());
        }
        return out;
    };
    auto as_matrix = [&](const nlohmann::json& j, const char* key, std::size_t rows, std::size_t cols) {
        if (!j.is_array() || j.size() != rows)
            throw std::invalid_argument(std::string(key) + ": must be an array of " + std::to_string(rows) + " rows");
        Matrix m(rows, cols);
        for (std::size_t r = 0; r < rows; ++r) {
            const auto& row = j[r];
            std::string path = std::string(key) + "[" + std::to_string(r) + "]";
            if (!row.is_array() || row.size() != cols)
                throw std::invalid_argument(path + ": must be an array of " + std::to_string(cols) + " numbers");
            for (std::size_t c = 0; c < cols; ++c) {
                if (!row[c].is_number()) throw std::invalid_argument(path + ": entries must be numbers");
                m(r, c) = row[c].get<double>();
            }
        }
        return m;
    };

    GameSpec s;
    s.u_size = as_size(require("u_size"), "u_size");
    s.v_size = as_size(require("v_size"), "v_size");
    s.w1_size = doc.contains("w1_size") ? as_size(doc["w1_size"], "w1_size") : s.u_size;
    s.w2_size = doc.contains("w2_size") ? as_size(doc["w2_size"], "w2_size") : s.u_size;
    s.prior = as_vector(require("prior"), "prior");
    s.cost1 = as_matrix(require("cost1"), "cost1", s.u_size, s.v_size);
    s.cost2 = as_matrix(require("cost2"), "cost2", s.u_size, s.v_size);
    s.cost3 = as_matrix(require("cost3"), "cost3", s.u_size, s.v_size);
    const auto& jr1 = require("r1");
    const auto& jr2 = require("r2");
    if (!jr1.is_number()) throw std::invalid_argument("r1: must be a number");
    if (!jr2.is_number()) throw std::invalid_argument("r2: must be a number");
    s.r1 = jr1.get<double>();
    s.r2 = jr2.get<double>();
    s.validate();
    return s;
}

inline GameSpec load_spec_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open spec file '" + path + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    return load_spec(ss.str());
}

inline std::string save_spec(const GameSpec& s) {
    nlohmann::json doc;
    doc["u_size"] = s.u_size;
    doc["v_size"] = s.v_size;
    doc["w1_size"] = s.w1_size;
    doc["w2_size"] = s.w2_size;
    doc["prior"] = s.prior;
    auto rows = [](const Matrix& m) {
        nlohmann::json out = nlohmann::json::array();
        for (std::size_t r = 0; r < m.rows; ++r) {
            nlohmann::json row = nlohmann::json::array();
            for (std::size_t c = 0; c < m.cols; ++c) row.push_back(m(r, c));
            out.push_back(row);
        }
        return out;
    };
    doc["cost1"] = rows(s.cost1);
    doc["cost2"] = rows(s.cost2);
    doc["cost3"] = rows(s.cost3);
    doc["r1"] = s.r1;
    doc["r2"] = s.r2;
    return doc.dump(2);
}

} // namespace cascade
