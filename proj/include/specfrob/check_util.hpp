#pragma once
// Accumulates jet comparisons into a single named check.

#include <string>
#include <vector>

#include "specfrob/jet.hpp"
#include "specfrob/report.hpp"

namespace specfrob {

struct CheckAccumulator {
    int nvars = 0;
    const std::vector<std::string>* names = nullptr;
    bool pass = true;
    double err = 0.0;
    std::optional<std::string> witness;
    std::string detail;
    int order = -1;

    CheckAccumulator(int nv, const std::vector<std::string>* nm) : nvars(nv), names(nm) {}

    void take(const JetDiff& d, const std::string& where = {}) {
        err = std::max(err, d.max_abs);
        order = order < 0 ? d.order : std::min(order, d.order);
        if (!d.equal && pass) {
            pass = false;
            if (d.witness) witness = mono::to_string(*d.witness, nvars, names);
            detail = where;
        }
    }
    void fail(const std::string& where) {
        if (pass) detail = where;
        pass = false;
    }
    Check finish(const std::string& name) const {
        Check c{name, pass, err, witness, detail, order};
        return c;
    }
};

}  // namespace specfrob
