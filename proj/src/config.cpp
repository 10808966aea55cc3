#include "sumhess/config.hpp"

#include "sumhess/errors.hpp"

#include <charconv>
#include <fstream>
#include <functional>
#include <istream>
#include <map>

namespace sumhess {

namespace {

std::string trim(std::string_view s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string_view::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return std::string(s.substr(b, e - b + 1));
}

// Drops a trailing # or ; comment that is not inside double quotes.
std::string strip_comment(const std::string& line) {
    bool quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        if (line[i] == '"') quoted = !quoted;
        if (!quoted && (line[i] == '#' || line[i] == ';')) return line.substr(0, i);
    }
    return line;
}

double to_real(const std::string& text) {
    const std::string t = trim(text);
    double v = 0.0;
    const auto [end, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
    if (t.empty() || ec != std::errc() || end != t.data() + t.size()) {
        throw ConfigError("expected a real number, got '" + t + "'");
    }
    return v;
}

long long to_integer(const std::string& text) {
    const std::string t = trim(text);
    long long v = 0;
    const auto [end, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
    if (t.empty() || ec != std::errc() || end != t.data() + t.size()) {
        throw ConfigError("expected an integer, got '" + t + "'");
    }
    return v;
}

bool to_bool(const std::string& text) {
    const std::string t = trim(text);
    if (t == "true" || t == "yes" || t == "1") return true;
    if (t == "false" || t == "no" || t == "0") return false;
    throw ConfigError("expected true or false, got '" + t + "'");
}

std::string unquote(const std::string& text) {
    const std::string t = trim(text);
    if (t.size() < 2 || t.front() != '"' || t.back() != '"') {
        throw ConfigError("expressions must be double-quoted, got '" + t + "'");
    }
    return t.substr(1, t.size() - 2);
}

Expression parse_expression(const std::string& source, const char* key) {
    try {
        return parse(source);
    } catch (const ParseError& e) {
        throw ConfigError(std::string(key) + ": " + e.what());
    }
}

// One value per axis, or a single value for all of them.
template <class T>
std::array<T, 3> per_axis(const std::vector<T>& values, int dim, const char* key) {
    std::array<T, 3> out{};
    if (values.size() == 1) {
        for (int a = 0; a < dim; ++a) out[a] = values[0];
    } else if (static_cast<int>(values.size()) == dim) {
        for (int a = 0; a < dim; ++a) out[a] = values[a];
    } else {
        throw ConfigError(std::string(key) + ": expected 1 or " + std::to_string(dim) + " values");
    }
    return out;
}

struct RawDomain {
    std::vector<double> lower{-1.0};
    std::vector<double> upper{1.0};
    std::vector<int> cells{32};
    std::vector<double> mask_center{0.0};
};

using Setter = std::function<void(const std::string&)>;

} // namespace

std::vector<double> parse_real_list(const std::string& text) {
    std::vector<double> out;
    std::size_t start = 0;
    for (;;) {
        const std::size_t comma = text.find(',', start);
        out.push_back(to_real(text.substr(start, comma == std::string::npos ? std::string::npos : comma - start)));
        if (comma == std::string::npos) break;
        start = comma + 1;
    }
    return out;
}

RunConfig parse_config(std::istream& in, const std::string& origin) {
    RunConfig cfg;
    RawDomain raw;
    int n = 0, k = 0;
    double alpha = 0.0;
    bool have_rhs = false;

    auto int_list = [](const std::string& v) {
        std::vector<int> out;
        for (double x : parse_real_list(v)) {
            if (x != static_cast<int>(x)) throw ConfigError("expected integers, got '" + trim(v) + "'");
            out.push_back(static_cast<int>(x));
        }
        return out;
    };

    std::map<std::string, std::map<std::string, Setter>> table;
    table["run"] = {
        {"id", [&](const std::string& v) { cfg.id = trim(v); }},
        {"seed", [&](const std::string& v) { cfg.seed = static_cast<std::uint64_t>(to_integer(v)); }},
        {"field_out", [&](const std::string& v) { cfg.field_out = trim(v); }},
        {"trace_out", [&](const std::string& v) { cfg.trace_out = trim(v); }},
        {"report_out", [&](const std::string& v) { cfg.report_out = trim(v); }},
    };
    table["problem"] = {
        {"n", [&](const std::string& v) { n = static_cast<int>(to_integer(v)); }},
        {"k", [&](const std::string& v) { k = static_cast<int>(to_integer(v)); }},
        {"alpha", [&](const std::string& v) { alpha = to_real(v); }},
        {"rhs", [&](const std::string& v) { cfg.rhs_source = unquote(v); have_rhs = true; }},
        {"boundary", [&](const std::string& v) { cfg.boundary_source = unquote(v); }},
        {"require_positive", [&](const std::string& v) { cfg.require_positive = to_bool(v); }},
    };
    table["domain"] = {
        {"lower", [&](const std::string& v) { raw.lower = parse_real_list(v); }},
        {"upper", [&](const std::string& v) { raw.upper = parse_real_list(v); }},
        {"cells", [&](const std::string& v) { raw.cells = int_list(v); }},
        {"mask", [&](const std::string& v) {
             const std::string t = trim(v);
             if (t == "ball") cfg.domain.ball_mask = true;
             else if (t == "none") cfg.domain.ball_mask = false;
             else throw ConfigError("mask must be 'ball' or 'none', got '" + t + "'");
         }},
        {"mask_center", [&](const std::string& v) { raw.mask_center = parse_real_list(v); }},
        {"mask_radius", [&](const std::string& v) { cfg.domain.mask_radius = to_real(v); }},
    };
    SolverConfig& s = cfg.solver;
    table["solver"] = {
        {"tol", [&](const std::string& v) { s.tol = to_real(v); }},
        {"max_iter", [&](const std::string& v) { s.max_iter = static_cast<int>(to_integer(v)); }},
        {"min_step", [&](const std::string& v) { s.min_step = to_real(v); }},
        {"homotopy", [&](const std::string& v) { s.homotopy = parse_real_list(v); }},
        {"refine_homotopy", [&](const std::string& v) { s.refine_homotopy = to_bool(v); }},
        {"max_homotopy_refinements",
         [&](const std::string& v) { s.max_homotopy_refinements = static_cast<int>(to_integer(v)); }},
        {"threads", [&](const std::string& v) { s.threads = static_cast<int>(to_integer(v)); }},
        {"fd_step", [&](const std::string& v) { s.fd_step = to_real(v); }},
        {"krylov_rtol", [&](const std::string& v) { s.krylov_rtol = to_real(v); }},
        {"krylov_max_iter", [&](const std::string& v) { s.krylov_max_iter = static_cast<int>(to_integer(v)); }},
        {"linear_required_reduction", [&](const std::string& v) { s.linear_required_reduction = to_real(v); }},
        {"direct_threshold",
         [&](const std::string& v) { s.direct_threshold = static_cast<std::size_t>(to_integer(v)); }},
    };
    table["estimates"] = {
        {"beta", [&](const std::string& v) { cfg.betas = parse_real_list(v); }},
        {"p_beta", [&](const std::string& v) { cfg.p_params.beta = to_real(v); }},
        {"a", [&](const std::string& v) { cfg.p_params.a = to_real(v); }},
        {"A", [&](const std::string& v) { cfg.p_params.a_const = to_real(v); }},
    };

    std::string section;
    std::string line;
    int lineno = 0;
    auto where = [&] { return origin + ":" + std::to_string(lineno) + ": "; };
    while (std::getline(in, line)) {
        ++lineno;
        const std::string t = trim(strip_comment(line));
        if (t.empty()) continue;
        if (t.front() == '[') {
            if (t.back() != ']') throw ConfigError(where() + "unterminated section header");
            section = trim(t.substr(1, t.size() - 2));
            if (!table.count(section)) throw ConfigError(where() + "unknown section [" + section + "]");
            continue;
        }
        const auto eq = t.find('=');
        if (eq == std::string::npos) throw ConfigError(where() + "expected key = value");
        const std::string key = trim(t.substr(0, eq));
        if (section.empty()) throw ConfigError(where() + "key '" + key + "' outside any section");
        const auto it = table[section].find(key);
        if (it == table[section].end()) throw ConfigError(where() + "unknown key '" + key + "' in [" + section + "]");
        try {
            it->second(t.substr(eq + 1));
        } catch (const ConfigError& e) {
            throw ConfigError(where() + key + ": " + e.what());
        }
    }

    const std::string at = origin + ": ";
    if (!have_rhs) throw ConfigError(at + "[problem] rhs is required");
    if (n < 2 || n > 3) throw ConfigError(at + "n must be 2 or 3 for grid solves");
    if (k < 1 || k > n) throw ConfigError(at + "k must satisfy 1 <= k <= n");
    if (!(alpha >= 0.0)) throw ConfigError(at + "alpha must be >= 0");
    cfg.params = SumHessianParams(n, k, alpha);

    try {
        cfg.domain.lower = per_axis(raw.lower, n, "lower");
        cfg.domain.upper = per_axis(raw.upper, n, "upper");
        cfg.domain.cells = per_axis(raw.cells, n, "cells");
        cfg.domain.mask_center = per_axis(raw.mask_center, n, "mask_center");
    } catch (const ConfigError& e) {
        throw ConfigError(at + e.what());
    }
    for (int a = 0; a < n; ++a) {
        if (cfg.domain.cells[a] < 8) throw ConfigError(at + "cells must be >= 8 on every axis");
        if (!(cfg.domain.upper[a] > cfg.domain.lower[a])) throw ConfigError(at + "upper must exceed lower");
    }
    if (cfg.domain.ball_mask && !(cfg.domain.mask_radius > 0.0)) throw ConfigError(at + "mask_radius must be > 0");
    if (!(s.tol > 0.0) || s.max_iter < 1 || !(s.min_step > 0.0) || s.threads < 1) {
        throw ConfigError(at + "solver tolerances and caps must be positive");
    }
    if (s.homotopy.empty() || s.homotopy.back() != 1.0) throw ConfigError(at + "homotopy schedule must end at 1");
    for (double b : cfg.betas) {
        if (!(b >= 1.0)) throw ConfigError(at + "every beta must be >= 1");
    }

    try {
        cfg.rhs = parse_expression(cfg.rhs_source, "rhs");
        cfg.boundary = parse_expression(cfg.boundary_source, "boundary");
    } catch (const ConfigError& e) {
        throw ConfigError(at + e.what());
    }
    for (Var v : {Var::U, Var::P1, Var::P2, Var::P3}) {
        if (cfg.boundary.uses(v)) throw ConfigError(at + "boundary may only use x1, x2, x3");
    }
    return cfg;
}

RunConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file " + path.string());
    return parse_config(in, path.string());
}

std::shared_ptr<const GridDomain> make_domain(const RunConfig& config) {
    const DomainConfig& d = config.domain;
    std::optional<BallMask> mask;
    if (d.ball_mask) mask = BallMask{d.mask_center, d.mask_radius};
    return std::make_shared<const GridDomain>(config.params.n, d.lower, d.upper, d.cells, mask);
}

RhsSpec rhs_from_expression(const Expression& expr, bool require_positive) {
    RhsSpec spec;
    spec.depends_on_u = expr.uses(Var::U);
    spec.depends_on_p = expr.uses(Var::P1) || expr.uses(Var::P2) || expr.uses(Var::P3);
    spec.require_positive = require_positive;
    spec.f = [expr](const RhsArgs& a) {
        Bindings env;
        env[Var::X1] = a.x[0];
        env[Var::X2] = a.x[1];
        env[Var::X3] = a.x[2];
        env[Var::U] = a.u;
        env[Var::P1] = a.p[0];
        env[Var::P2] = a.p[1];
        env[Var::P3] = a.p[2];
        try {
            return expr.evaluate(env);
        } catch (const EvalError& e) {
            throw InstanceError(std::string("right-hand side: ") + e.what());
        }
    };
    return spec;
}

BoundaryFunction boundary_from_expression(const Expression& expr) {
    return [expr](const Point& x) {
        Bindings env;
        env[Var::X1] = x[0];
        env[Var::X2] = x[1];
        env[Var::X3] = x[2];
        try {
            return expr.evaluate(env);
        } catch (const EvalError& e) {
            throw InstanceError(std::string("boundary: ") + e.what());
        }
    };
}

SumHessianSpec make_spec(const RunConfig& config) {
    return {config.params, rhs_from_expression(config.rhs, config.require_positive)};
}

} // namespace sumhess
