#include "omega/config.hpp"

#include <cerrno>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "omega/errors.hpp"

namespace omega {

namespace {

std::string trim(const std::string& s) {
    const auto a = s.find_first_not_of(" \t\r\n");
    if (a == std::string::npos) return {};
    const auto b = s.find_last_not_of(" \t\r\n");
    return s.substr(a, b - a + 1);
}

double num(const std::string& key, const std::string& v, const std::string& origin) {
    errno = 0;
    char* end = nullptr;
    const double x = std::strtod(v.c_str(), &end);
    if (end != v.c_str() + v.size() || v.empty() || errno == ERANGE)
        throw validation_error(origin + ": bad number for " + key + ": '" + v + "'");
    return x;
}

std::int64_t integer(const std::string& key, const std::string& v,
                     const std::string& origin) {
    const double x = num(key, v, origin);
    const auto i = (std::int64_t)x;
    if ((double)i != x)
        throw validation_error(origin + ": " + key + " must be an integer");
    return i;
}

bool flag(const std::string& key, const std::string& v, const std::string& origin) {
    if (v == "true" || v == "1") return true;
    if (v == "false" || v == "0") return false;
    throw validation_error(origin + ": " + key + " must be true/false");
}

}  // namespace

RunConfig parse_config_text(const std::string& text, const std::string& origin) {
    RunConfig rc;
    std::map<int, JumpTerm> jumps;  // 1-based index -> term, order-independent
    std::istringstream in(text);
    std::string line;
    int ln = 0;
    bool saw_mu = false, saw_sigma = false, saw_r = false, saw_q = false,
         saw_c = false, saw_rho = false;
    while (std::getline(in, line)) {
        ++ln;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw validation_error(origin + ":" + std::to_string(ln) +
                                   ": expected 'key = value'");
        const std::string key = trim(line.substr(0, eq));
        const std::string val = trim(line.substr(eq + 1));
        if (key.empty() || val.empty())
            throw validation_error(origin + ":" + std::to_string(ln) +
                                   ": expected 'key = value'");
        if (rc.raw.count(key))
            throw validation_error(origin + ": duplicate key " + key);
        rc.raw[key] = val;

        if (key == "model.mu") {
            rc.model.mu = num(key, val, origin);
            saw_mu = true;
        } else if (key == "model.sigma") {
            rc.model.sigma = num(key, val, origin);
            saw_sigma = true;
        } else if (key.rfind("jump.", 0) == 0) {
            const auto dot = key.find('.', 5);
            if (dot == std::string::npos)
                throw validation_error(origin + ": unknown key " + key);
            int idx = 0;
            try {
                idx = std::stoi(key.substr(5, dot - 5));
            } catch (...) {
                throw validation_error(origin + ": unknown key " + key);
            }
            if (idx < 1 || idx > 64)
                throw validation_error(origin + ": jump index out of range in " + key);
            const std::string field = key.substr(dot + 1);
            if (field == "rate")
                jumps[idx].rate = num(key, val, origin);
            else if (field == "intensity")
                jumps[idx].decay = num(key, val, origin);
            else
                throw validation_error(origin + ": unknown key " + key);
        } else if (key == "prefs.r") {
            rc.prefs.r = num(key, val, origin);
            saw_r = true;
        } else if (key == "prefs.q") {
            rc.prefs.q = num(key, val, origin);
            saw_q = true;
        } else if (key == "prefs.c") {
            rc.prefs.c = num(key, val, origin);
            saw_c = true;
        } else if (key == "prefs.rho") {
            rc.prefs.rho = num(key, val, origin);
            saw_rho = true;
        } else if (key == "prefs.K") {
            rc.prefs.K = num(key, val, origin);
        } else if (key == "sim.x0") {
            rc.x0 = num(key, val, origin);
        } else if (key == "sim.s0") {
            rc.s0 = num(key, val, origin);
        } else if (key == "sim.paths") {
            rc.paths = integer(key, val, origin);
        } else if (key == "sim.dt") {
            rc.dt = num(key, val, origin);
        } else if (key == "sim.seed") {
            rc.seed = (std::uint64_t)integer(key, val, origin);
        } else if (key == "sim.horizon") {
            rc.horizon = num(key, val, origin);
        } else if (key == "sim.antithetic") {
            rc.antithetic = flag(key, val, origin);
        } else if (key == "sim.threads") {
            rc.threads = (int)integer(key, val, origin);
        } else if (key == "sim.substeps") {
            rc.substeps = (int)integer(key, val, origin);
        } else if (key == "grid.n") {
            rc.grid_n = (int)integer(key, val, origin);
        } else if (key == "grid.xmin") {
            rc.xmin = num(key, val, origin);
        } else if (key == "grid.xmax") {
            rc.xmax = num(key, val, origin);
        } else if (key == "grid.smin") {
            rc.smin = num(key, val, origin);
        } else if (key == "grid.smax") {
            rc.smax = num(key, val, origin);
        } else {
            throw validation_error(origin + ": unknown key " + key);
        }
    }
    if (!saw_mu || !saw_sigma)
        throw validation_error(origin + ": model.mu and model.sigma are required");
    if (!saw_r || !saw_q || !saw_c || !saw_rho)
        throw validation_error(origin + ": prefs.r/q/c/rho are required");
    for (const auto& [idx, term] : jumps) {
        if (!(term.rate > 0.0) || !(term.decay > 0.0))
            throw validation_error(origin + ": jump." + std::to_string(idx) +
                                   " needs positive rate and intensity");
        rc.model.jumps.terms.push_back(term);
    }
    return rc;
}

RunConfig parse_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw validation_error("cannot open config file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_config_text(buf.str(), path);
}

}  // namespace omega
