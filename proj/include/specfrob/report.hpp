#pragma once

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

namespace specfrob {

struct Check {
    std::string name;
    bool pass = false;
    double max_abs_error = 0.0;
    std::optional<std::string> witness;
    std::string detail;
    int validity_order = -1;  // lowest jet order that entered the comparison; -1 if none
};

struct CheckReport {
    std::vector<Check> checks;

    void add(Check c) { checks.push_back(std::move(c)); }
    void add(const std::string& name, bool pass, double err = 0.0, std::optional<std::string> witness = {},
             std::string detail = {}) {
        checks.push_back(Check{name, pass, err, std::move(witness), std::move(detail)});
    }
    void merge(const CheckReport& o, const std::string& prefix = {}) {
        for (auto c : o.checks) {
            if (!prefix.empty()) c.name = prefix + c.name;
            checks.push_back(std::move(c));
        }
    }
    bool all_pass() const {
        for (auto& c : checks)
            if (!c.pass) return false;
        return true;
    }
    const Check* find(const std::string& name) const {
        for (auto& c : checks)
            if (c.name == name) return &c;
        return nullptr;
    }
    bool passed(const std::string& name) const {
        auto* c = find(name);
        return c && c->pass;
    }
};

inline nlohmann::json to_json(const Check& c) {
    nlohmann::json j{{"check_name", c.name}, {"pass", c.pass}, {"max_abs_error", c.max_abs_error}};
    if (c.witness) j["witness_monomial"] = *c.witness;
    if (!c.detail.empty()) j["detail"] = c.detail;
    if (c.validity_order >= 0) j["validity_order"] = c.validity_order;
    return j;
}

inline nlohmann::json to_json(const CheckReport& r) {
    nlohmann::json a = nlohmann::json::array();
    for (auto& c : r.checks) a.push_back(to_json(c));
    return a;
}

}  // namespace specfrob
