#include "tfold/io.hpp"

#include <algorithm>
#include <cstdio>
#include <sstream>

namespace tfold::io {

namespace {

double num(const json& j, const char* key, double dflt) {
    if (!j.contains(key)) return dflt;
    if (!j.at(key).is_number()) throw InputError(std::string("field '") + key + "' must be a number");
    return j.at(key).get<double>();
}

std::vector<double> numbers(const json& j, const char* key, bool required = true) {
    if (!j.contains(key)) {
        if (required) throw InputError(std::string("missing field '") + key + "'");
        return {};
    }
    const auto& a = j.at(key);
    if (!a.is_array()) throw InputError(std::string("field '") + key + "' must be an array of numbers");
    std::vector<double> out;
    for (const auto& v : a) {
        if (!v.is_number()) throw InputError(std::string("field '") + key + "' must be an array of numbers");
        out.push_back(v.get<double>());
    }
    return out;
}

json vec_json(const Vec& v) {
    json a = json::array();
    for (int i = 0; i < v.size(); ++i) a.push_back(v(i));
    return a;
}

Vec json_vec(const json& a) {
    Vec v(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) v(i) = a[i].get<double>();
    return v;
}

void apply_overrides(json& target, const std::map<std::string, double>& ov, const std::vector<std::string>& allowed,
                     const char* type) {
    for (const auto& [k, v] : ov) {
        if (std::find(allowed.begin(), allowed.end(), k) == allowed.end())
            throw InputError("parameter '" + k + "' is not defined for model type " + type);
        target[k] = v;
    }
}

}  // namespace

LoadedModel parse_model(const json& j0, const std::map<std::string, double>& overrides) {
    if (!j0.is_object()) throw InputError("model file must hold a JSON object");
    json j = j0;
    if (!j.contains("schema") || j["schema"] != kModelSchema)
        throw InputError(std::string("model file needs \"schema\": \"") + kModelSchema + "\"");
    if (!j.contains("type") || !j["type"].is_string()) throw InputError("model file needs a string \"type\"");
    LoadedModel m;
    m.type = j["type"].get<std::string>();
    if (!j.contains("params")) j["params"] = json::object();
    if (!j["params"].is_object()) throw InputError("\"params\" must be an object");
    json& p = j["params"];

    try {
        if (m.type == "scalar6") {
            apply_overrides(p, overrides, {"mu", "nu", "eta", "gamma"}, "scalar6");
            ScalarSixthOrder s;
            s.mu = num(p, "mu", s.mu);
            s.nu = num(p, "nu", s.nu);
            s.eta = num(p, "eta", s.eta);
            s.gamma = num(p, "gamma", s.gamma);
            m.spec = s;
        } else if (m.type == "scalar_general") {
            apply_overrides(p, overrides, {"mu", "nu"}, "scalar_general");
            GeneralScalarModel g;
            g.m = static_cast<int>(num(j, "m", 3));
            g.a = numbers(j, "a");
            g.a_tilde = numbers(j, "a_tilde");
            g.c = numbers(j, "c", false);
            if (j.contains("b")) {
                if (!j["b"].is_array()) throw InputError("\"b\" must be a table of numbers");
                for (const auto& row : j["b"]) {
                    if (!row.is_array()) throw InputError("\"b\" must be a table of numbers");
                    std::vector<double> r;
                    for (const auto& v : row) {
                        if (!v.is_number()) throw InputError("\"b\" must be a table of numbers");
                        r.push_back(v.get<double>());
                    }
                    g.b.push_back(r);
                }
            }
            if (!j.contains("reaction") || !j["reaction"].is_object()) throw InputError("missing object \"reaction\"");
            g.reaction.p = numbers(j["reaction"], "p");
            g.reaction.q = numbers(j["reaction"], "q");
            g.mu = num(p, "mu", 0.0);
            g.nu = num(p, "nu", 0.0);
            if (j.contains("nu_range")) {
                const auto r = numbers(j, "nu_range");
                if (r.size() != 2) throw InputError("\"nu_range\" needs two numbers");
                g.nu_lo = r[0], g.nu_hi = r[1];
            }
            g.k_scan_max = num(j, "k_scan_max", g.k_scan_max);
            g.validate();
            m.spec = g;
        } else if (m.type == "rd") {
            std::vector<double> D = numbers(j, "D", false);
            RDModel r;
            if (j.contains("builtin")) {
                if (!j["builtin"].is_string()) throw InputError("\"builtin\" must be a string");
                if (!j.contains("builtin_params")) j["builtin_params"] = json::object();
                std::map<std::string, double> bp;
                std::map<std::string, double> rest;
                for (const auto& [k, v] : overrides) (k == "mu" || k == "nu" ? rest : bp)[k] = v;
                for (const auto& [k, v] : bp) j["builtin_params"][k] = v;
                apply_overrides(p, rest, {"mu", "nu"}, "rd");
                std::map<std::string, double> params;
                for (const auto& [k, v] : j["builtin_params"].items()) {
                    if (!v.is_number()) throw InputError("builtin parameter '" + k + "' must be a number");
                    params[k] = v.get<double>();
                }
                r = make_rd_builtin(j["builtin"].get<std::string>(), params, D);
            } else {
                apply_overrides(p, overrides, {"mu", "nu"}, "rd");
                r.n = static_cast<int>(num(j, "n", static_cast<double>(D.size())));
                r.D = D;
                if (!j.contains("terms") || !j["terms"].is_array()) throw InputError("rd model needs \"terms\" or \"builtin\"");
                for (const auto& t : j["terms"]) {
                    Monomial mo;
                    mo.comp = static_cast<int>(num(t, "comp", -1));
                    mo.coef = num(t, "coef", 0.0);
                    mo.pm = static_cast<int>(num(t, "mu", 0));
                    mo.pn = static_cast<int>(num(t, "nu", 0));
                    for (double e : numbers(t, "e")) mo.e.push_back(static_cast<int>(e));
                    r.terms.push_back(mo);
                }
                r.k_scan_max = num(j, "k_scan_max", r.k_scan_max);
                r.validate();
            }
            r.mu = num(p, "mu", 0.0);
            r.nu = num(p, "nu", 0.0);
            m.spec = r;
        } else {
            throw InputError("unknown model type '" + m.type + "' (expected scalar6, scalar_general or rd)");
        }
    } catch (const ModelError& e) {
        throw InputError(e.what());
    } catch (const json::exception& e) {
        throw InputError(e.what());
    }
    if (j.contains("seeds")) {
        const auto& s = j["seeds"];
        if (!s.is_object()) throw InputError("\"seeds\" must be an object");
        if (s.contains("nu")) m.nu_seed = num(s, "nu", 0.0);
        if (s.contains("mu")) m.mu_seed = num(s, "mu", 0.0);
    }
    m.source = j;
    return m;
}

json read_json(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InputError("cannot open " + path);
    try {
        return json::parse(in);
    } catch (const json::parse_error& e) {
        throw InputError(path + ": " + e.what());
    }
}

void write_json(const std::string& path, const json& j) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << j.dump(2) << "\n";
}

LoadedModel load_model(const std::string& path, const std::map<std::string, double>& overrides) {
    return parse_model(read_json(path), overrides);
}

json to_json(const TuringFoldReport& r) {
    json j;
    j["schema"] = kReportSchema;
    j["model_class"] = r.model_class;
    j["mu_star"] = r.mu_star;
    j["nu_star"] = r.nu_star;
    j["k_star"] = r.k_star;
    j["u_star"] = vec_json(r.u_star);
    j["residual"] = r.residual;
    j["rho_kk"] = r.rho_kk;
    j["omega_kk"] = r.omega_kk;
    j["expansion"] = r.expansion;
    json ev = json::object();
    for (const auto& [k, v] : r.expansion_vec) ev[k] = vec_json(v);
    j["expansion_vec"] = ev;
    j["q"] = r.q;
    j["v_s"] = vec_json(r.v_s);
    j["p_s"] = vec_json(r.p_s);
    j["v_t"] = vec_json(r.v_t);
    j["p_t"] = vec_json(r.p_t);
    json au = json::array();
    for (const auto& a : r.audit) au.push_back({{"name", a.name}, {"rule", a.rule}, {"value", a.value}, {"pass", a.pass}});
    j["audit"] = au;
    j["audit_passed"] = r.audit_passed();
    return j;
}

TuringFoldReport report_from_json(const json& j) {
    if (!j.is_object() || !j.contains("schema") || j["schema"] != kReportSchema)
        throw InputError(std::string("report file needs \"schema\": \"") + kReportSchema + "\"");
    try {
        TuringFoldReport r;
        r.model_class = j.at("model_class").get<std::string>();
        r.mu_star = j.at("mu_star").get<double>();
        r.nu_star = j.at("nu_star").get<double>();
        r.k_star = j.at("k_star").get<double>();
        r.u_star = json_vec(j.at("u_star"));
        r.residual = j.at("residual").get<double>();
        r.rho_kk = j.at("rho_kk").get<double>();
        r.omega_kk = j.at("omega_kk").get<double>();
        r.expansion = j.at("expansion").get<std::map<std::string, double>>();
        for (const auto& [k, v] : j.at("expansion_vec").items()) r.expansion_vec[k] = json_vec(v);
        r.q = j.at("q").get<std::map<std::string, double>>();
        r.v_s = json_vec(j.at("v_s"));
        r.p_s = json_vec(j.at("p_s"));
        r.v_t = json_vec(j.at("v_t"));
        r.p_t = json_vec(j.at("p_t"));
        for (const auto& a : j.at("audit"))
            r.audit.push_back({a.at("name").get<std::string>(), a.at("rule").get<std::string>(), a.at("value").get<double>(),
                               a.at("pass").get<bool>()});
        return r;
    } catch (const json::exception& e) {
        throw InputError(std::string("malformed report: ") + e.what());
    }
}

json to_json(const ABCoefficients& c) {
    json j;
    j["raw"] = c.raw;
    j["alpha"] = c.alpha;
    j["d"] = c.d;
    j["beta"] = c.beta;
    j["alpha_closed"] = c.alpha_closed;
    j["d_closed"] = c.d_closed;
    j["beta_closed"] = c.beta_closed;
    j["mu_hat"] = c.mu_hat;
    j["constraint"] = c.constraint;
    j["maps"] = {{"a", c.maps.a}, {"b", c.maps.b}, {"s", c.maps.s}, {"t", c.maps.t}, {"rho", c.maps.rho}};
    return j;
}

json to_json(const LandauResult& l) {
    return {{"delta", l.delta},       {"L", l.L},         {"L_star", l.L_star},
            {"L_leading", l.L_leading}, {"beta", l.beta}, {"beta_degenerate", l.beta_degenerate},
            {"opposite_signs", l.opposite_signs}, {"mu_t", l.turing.mu_t}, {"k_c", l.turing.k_c}};
}

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

CsvWriter::CsvWriter(const std::string& path, const std::vector<std::string>& header)
    : out_(path), cols_(header.size()) {
    if (!out_) throw std::runtime_error("cannot write " + path);
    for (std::size_t i = 0; i < header.size(); ++i) out_ << (i ? "," : "") << header[i];
    out_ << "\n";
}

void CsvWriter::sep() {
    if (col_ >= cols_) throw std::logic_error("CSV row has more cells than the header");
    if (col_++) out_ << ",";
}

CsvWriter& CsvWriter::operator<<(double v) {
    sep();
    out_ << fmt(v);
    return *this;
}

CsvWriter& CsvWriter::operator<<(const std::string& s) {
    sep();
    out_ << s;
    return *this;
}

void CsvWriter::end_row() {
    if (col_ != cols_) throw std::logic_error("CSV row has fewer cells than the header");
    out_ << "\n";
    col_ = 0;
}

json make_manifest(const std::string& command, const std::vector<std::string>& argv, unsigned long long seed,
                   int threads, const json& config, const std::vector<std::string>& outputs) {
    return {{"schema", kManifestSchema}, {"command", command}, {"argv", argv},     {"seed", seed},
            {"threads", threads},        {"config", config},   {"outputs", outputs}};
}

}  // namespace tfold::io
