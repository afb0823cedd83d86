#include "harness/config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "harness/csv.hpp"

namespace depsgd::harness {

namespace {

std::string trim(const std::string& s) {
    std::size_t a = s.find_first_not_of(" \t\r");
    std::size_t b = s.find_last_not_of(" \t\r");
    if (a == std::string::npos) return "";
    return s.substr(a, b - a + 1);
}

std::uint64_t fnv1a(const std::string& s) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : s) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

struct RawConfig {
    std::vector<std::pair<std::string, std::string>> base;  // dotted key -> value, in order
    std::vector<std::pair<std::string, std::string>> overrides;  // [override] keys beat everything
    std::vector<std::pair<std::string, std::vector<std::pair<std::string, std::string>>>> variants;
};

RawConfig tokenize(const std::string& text) {
    RawConfig raw;
    std::string section;
    bool in_variant = false;
    bool in_override = false;
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const std::size_t hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']')
                throw ConfigError("config line " + std::to_string(lineno) + ": unterminated section");
            std::string name = trim(line.substr(1, line.size() - 2));
            if (name.rfind("variant", 0) == 0 && (name.size() == 7 || name[7] == ' ')) {
                std::string label = trim(name.size() > 7 ? name.substr(8) : "");
                if (!label.empty() && label.front() == '"' && label.back() == '"' && label.size() >= 2)
                    label = label.substr(1, label.size() - 2);
                if (label.empty())
                    throw ConfigError("config line " + std::to_string(lineno) + ": variant needs a name");
                raw.variants.emplace_back(label, std::vector<std::pair<std::string, std::string>>{});
                in_variant = true;
                in_override = false;
                section.clear();
            } else if (name == "override") {
                // subsequent dotted keys beat both base and variant values
                in_variant = false;
                in_override = true;
                section.clear();
            } else {
                section = name;
                in_variant = false;
                in_override = false;
            }
            continue;
        }
        const std::size_t eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError("config line " + std::to_string(lineno) + ": expected key = value");
        std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key.empty()) throw ConfigError("config line " + std::to_string(lineno) + ": empty key");
        if (key.find('.') == std::string::npos) {
            if (section.empty())
                throw ConfigError("config line " + std::to_string(lineno) + ": key '" + key +
                                  "' needs a section or a dotted name");
            key = section + "." + key;
        }
        if (in_variant)
            raw.variants.back().second.emplace_back(key, value);
        else if (in_override)
            raw.overrides.emplace_back(key, value);
        else
            raw.base.emplace_back(key, value);
    }
    return raw;
}

/// Typed view over a key/value map that records consumption so leftovers
/// can be reported as unknown keys.
class KeyMap {
public:
    explicit KeyMap(const std::vector<std::pair<std::string, std::string>>& pairs) {
        for (const auto& [k, v] : pairs) kv_[k] = v;  // later duplicates win
    }

    bool has(const std::string& key) const { return kv_.count(key) > 0; }

    std::string get_string(const std::string& key, const std::string& fallback) {
        const auto it = kv_.find(key);
        if (it == kv_.end()) return fallback;
        consumed_.insert(key);
        return it->second;
    }

    long get_long(const std::string& key, long fallback) {
        const auto it = kv_.find(key);
        if (it == kv_.end()) return fallback;
        consumed_.insert(key);
        try {
            std::size_t pos = 0;
            const long v = std::stol(it->second, &pos);
            if (pos != it->second.size()) throw std::invalid_argument("");
            return v;
        } catch (...) {
            throw ConfigError("key '" + key + "': expected integer, got '" + it->second + "'");
        }
    }

    std::uint64_t get_u64(const std::string& key) {
        const auto it = kv_.find(key);
        if (it == kv_.end()) throw ConfigError("missing required key '" + key + "'");
        consumed_.insert(key);
        try {
            std::size_t pos = 0;
            const unsigned long long v = std::stoull(it->second, &pos);
            if (pos != it->second.size()) throw std::invalid_argument("");
            return v;
        } catch (...) {
            throw ConfigError("key '" + key + "': expected unsigned integer, got '" + it->second +
                              "'");
        }
    }

    double get_double(const std::string& key, double fallback) {
        const auto it = kv_.find(key);
        if (it == kv_.end()) return fallback;
        consumed_.insert(key);
        try {
            std::size_t pos = 0;
            const double v = std::stod(it->second, &pos);
            if (pos != it->second.size()) throw std::invalid_argument("");
            return v;
        } catch (...) {
            throw ConfigError("key '" + key + "': expected number, got '" + it->second + "'");
        }
    }

    bool get_bool(const std::string& key, bool fallback) {
        const auto it = kv_.find(key);
        if (it == kv_.end()) return fallback;
        consumed_.insert(key);
        if (it->second == "true") return true;
        if (it->second == "false") return false;
        throw ConfigError("key '" + key + "': expected true/false, got '" + it->second + "'");
    }

    std::vector<double> get_doubles(const std::string& key, std::vector<double> fallback) {
        const auto it = kv_.find(key);
        if (it == kv_.end()) return fallback;
        consumed_.insert(key);
        std::vector<double> out;
        std::stringstream ss(it->second);
        std::string item;
        while (std::getline(ss, item, ',')) {
            item = trim(item);
            if (item.empty()) continue;
            try {
                std::size_t pos = 0;
                out.push_back(std::stod(item, &pos));
                if (pos != item.size()) throw std::invalid_argument("");
            } catch (...) {
                throw ConfigError("key '" + key + "': bad list entry '" + item + "'");
            }
        }
        return out;
    }

    std::vector<int> get_ints(const std::string& key, std::vector<int> fallback) {
        const auto it = kv_.find(key);
        if (it == kv_.end()) return fallback;
        consumed_.insert(key);
        std::vector<int> out;
        std::stringstream ss(it->second);
        std::string item;
        while (std::getline(ss, item, ',')) {
            item = trim(item);
            if (item.empty()) continue;
            try {
                std::size_t pos = 0;
                out.push_back(std::stoi(item, &pos));
                if (pos != item.size()) throw std::invalid_argument("");
            } catch (...) {
                throw ConfigError("key '" + key + "': bad list entry '" + item + "'");
            }
        }
        return out;
    }

    void check_all_consumed() const {
        for (const auto& [k, v] : kv_)
            if (consumed_.count(k) == 0) throw ConfigError("unknown key '" + k + "'");
    }

private:
    std::map<std::string, std::string> kv_;
    std::set<std::string> consumed_;
};

std::vector<int> to_zero_based(const std::vector<int>& one_based, const std::string& key) {
    std::vector<int> out;
    out.reserve(one_based.size());
    for (int i : one_based) {
        if (i < 1)
            throw ConfigError("key '" + key + "': indices are 1-based, got " + std::to_string(i));
        out.push_back(i - 1);
    }
    return out;
}

std::string join_doubles(const std::vector<double>& v) {
    std::string out;
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (i) out += ',';
        out += format_double(v[i]);
    }
    return out;
}

std::string join_one_based(const std::vector<int>& v) {
    std::string out;
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (i) out += ',';
        out += std::to_string(v[i] + 1);
    }
    return out;
}

VariantConfig parse_variant(KeyMap& keys, const std::string& label, const std::string& kind) {
    VariantConfig v;
    v.label = label;

    v.d = static_cast<int>(keys.get_long("problem.d", 1));
    if (v.d < 1) throw ConfigError("key 'problem.d': must be >= 1");
    v.sigma = keys.get_double("problem.sigma", 1.0);
    v.arms_gen = keys.get_string("problem.arms", "");
    if (v.arms_gen.empty()) {
        if (keys.has("problem.beta")) {
            v.arms.push_back(keys.get_doubles("problem.beta", {}));
        } else {
            for (int i = 1;; ++i) {
                const std::string key = "problem.arm_" + std::to_string(i);
                if (!keys.has(key)) break;
                v.arms.push_back(keys.get_doubles(key, {}));
            }
        }
    } else if (v.arms_gen != "axes5" && v.arms_gen != "margin5") {
        throw ConfigError("key 'problem.arms': unknown generator '" + v.arms_gen + "'");
    }
    v.beta_gen = keys.get_string("problem.beta_gen", "");
    if (!v.beta_gen.empty() && v.beta_gen != "gaussian_norm")
        throw ConfigError("key 'problem.beta_gen': unknown generator '" + v.beta_gen + "'");
    v.beta_norm = keys.get_double("problem.beta_norm", 1.0);
    const long sparsity = keys.get_long("problem.sparsity", 0);
    if (sparsity > 0) v.sparsity = static_cast<int>(sparsity);
    const std::string support = keys.get_string("problem.support", "");
    if (support == "random") {
        v.support_gen = "random";
    } else if (!support.empty()) {
        KeyMap tmp({{"problem.support", support}});
        v.support = to_zero_based(tmp.get_ints("problem.support", {}), "problem.support");
    }
    v.support_values = keys.get_doubles("problem.support_values", {});
    if (keys.has("problem.lambda_min")) v.lambda_min = keys.get_double("problem.lambda_min", 0);
    if (keys.has("problem.lambda_max")) v.lambda_max = keys.get_double("problem.lambda_max", 0);
    if (keys.has("problem.lambda_max_s_off"))
        v.lambda_max_s_off = keys.get_double("problem.lambda_max_s_off", 0);
    if (keys.has("problem.lambda_max_1_off"))
        v.lambda_max_1_off = keys.get_double("problem.lambda_max_1_off", 0);
    if (keys.has("problem.h")) v.h = keys.get_double("problem.h", 0);
    v.optimal_arms =
        to_zero_based(keys.get_ints("problem.optimal_arms", {}), "problem.optimal_arms");

    const std::string ck = keys.get_string("covariates.kind", "iid_gaussian");
    if (ck == "iid_gaussian")
        v.cov_kind = data::CovariateProcess::Kind::IidGaussian;
    else if (ck == "sphere_ar")
        v.cov_kind = data::CovariateProcess::Kind::SphereAR;
    else if (ck == "weighted_history")
        v.cov_kind = data::CovariateProcess::Kind::WeightedHistory;
    else if (ck == "correlated_gaussian")
        v.cov_kind = data::CovariateProcess::Kind::CorrelatedGaussian;
    else if (ck == "signed_levels")
        v.cov_kind = data::CovariateProcess::Kind::SignedLevels;
    else
        throw ConfigError("key 'covariates.kind': unknown kind '" + ck + "'");
    const std::string ci = keys.get_string("covariates.init", "gaussian");
    if (ci == "gaussian")
        v.cov_init = data::CovariateProcess::Init::Gaussian;
    else if (ci == "unit_sphere")
        v.cov_init = data::CovariateProcess::Init::UnitSphere;
    else
        throw ConfigError("key 'covariates.init': unknown init '" + ci + "'");
    v.cov_window = static_cast<int>(keys.get_long("covariates.window", 16));
    if (v.cov_window < 1) throw ConfigError("key 'covariates.window': must be >= 1");
    v.cov_rho = keys.get_double("covariates.rho", 0.5);
    v.cov_levels = keys.get_doubles("covariates.levels", {1.0, 2.0});

    const std::string nk = keys.get_string("noise.kind", "iid_gaussian");
    if (nk == "iid_gaussian")
        v.noise_kind = data::NoiseProcess::Kind::IidGaussian;
    else if (nk == "dependent_sign")
        v.noise_kind = data::NoiseProcess::Kind::DependentSign;
    else
        throw ConfigError("key 'noise.kind': unknown kind '" + nk + "'");

    v.eta_const = keys.get_double("stepsize.eta_const", 0.0);
    v.c_a = keys.get_double("stepsize.c_a", 3.0);
    v.c_b = keys.get_double("stepsize.c_b", 100.0);
    v.stepsize_t1 = keys.get_long("stepsize.t1", kind == "bandit" ? 0 : -1);

    const std::string ek = keys.get_string("exploration.kind", "constant");
    if (ek == "constant")
        v.explore_kind = sched::ExplorationSchedule::Kind::ConstantPi;
    else if (ek == "harmonic")
        v.explore_kind = sched::ExplorationSchedule::Kind::Harmonic;
    else if (ek == "power")
        v.explore_kind = sched::ExplorationSchedule::Kind::Power;
    else if (ek == "two_phase_zero")
        v.explore_kind = sched::ExplorationSchedule::Kind::TwoPhaseZero;
    else if (ek == "rational")
        v.explore_kind = sched::ExplorationSchedule::Kind::Rational;
    else if (ek == "rational_sqrt")
        v.explore_kind = sched::ExplorationSchedule::Kind::RationalSqrt;
    else
        throw ConfigError("key 'exploration.kind': unknown kind '" + ek + "'");
    v.pi_bar = keys.get_double("exploration.pi_bar", 0.5);
    v.c_pi = keys.get_double("exploration.c_pi", 10.0);
    v.p = keys.get_double("exploration.p", 0.5);
    v.expl_a = keys.get_double("exploration.a", 5.0);
    v.expl_b = keys.get_double("exploration.b", 50.0);
    v.explore_t1 = keys.get_long("exploration.t1", 0);
    v.pre_rate = keys.get_double("exploration.pre_rate", 0.5);
    v.c_star = keys.get_double("exploration.c_star", 1.0);

    const std::string tk = keys.get_string("tail.kind", "log_t");
    if (tk == "zero")
        v.tail_kind = sched::TailSequence::Kind::Zero;
    else if (tk == "log_t")
        v.tail_kind = sched::TailSequence::Kind::LogT;
    else
        throw ConfigError("key 'tail.kind': expected zero/log_t");
    v.tail_c = keys.get_double("tail.c", 1.0);
    if (v.tail_c <= 0.0) throw ConfigError("key 'tail.c': must be positive");

    const std::string sm = keys.get_string("sparse.mode", "heuristic");
    if (sm == "fixed")
        v.sparse.mode = sgd::SparseMode::FixedSupport;
    else if (sm == "oracle_local")
        v.sparse.mode = sgd::SparseMode::OracleLocal;
    else if (sm == "oracle_cumulative")
        v.sparse.mode = sgd::SparseMode::OracleCumulative;
    else if (sm == "heuristic")
        v.sparse.mode = sgd::SparseMode::Heuristic;
    else
        throw ConfigError("key 'sparse.mode': unknown mode '" + sm + "'");
    v.sparse.warmup_steps = keys.get_long("sparse.warmup", 2000);
    v.sparse.warmup_eta = keys.get_double("sparse.warmup_eta", 0.0);
    v.sparse.keep_top = static_cast<int>(keys.get_long("sparse.keep_top", 0));
    v.sparse.rho = keys.get_double("sparse.rho", 10.0);
    v.sparse.min_gap = keys.get_long("sparse.min_gap", 1000);
    const std::string hs = keys.get_string("sparse.heuristic_stat", "cumulative");
    if (hs == "cumulative")
        v.sparse.heuristic_cumulative = true;
    else if (hs == "window")
        v.sparse.heuristic_cumulative = false;
    else
        throw ConfigError("key 'sparse.heuristic_stat': expected cumulative/window");
    v.sparse.s_max = static_cast<int>(keys.get_long("sparse.s_max", 0));
    v.sparse.c_sched = keys.get_double("sparse.c_sched", 1.0);
    v.sparse.initial_support =
        to_zero_based(keys.get_ints("sparse.support_init", {}), "sparse.support_init");
    v.sparse.compare_dense = keys.get_bool("sparse.compare_dense", false);

    v.t_eval = keys.get_long("infer.t_eval", 100000);
    v.level = keys.get_double("infer.level", 0.95);

    v.verify_tau = keys.get_long("verify.tau", -1);
    v.verify_pi = keys.get_double("verify.pi", 1.0 / 3.0);
    v.verify_h0 = keys.get_double("verify.h0", 0.05);
    v.verify_samples = keys.get_long("verify.samples", 10000);
    return v;
}

void render_variant(std::ostringstream& out, const VariantConfig& v) {
    out << "problem.d = " << v.d << "\n";
    out << "problem.sigma = " << format_double(v.sigma) << "\n";
    if (!v.arms_gen.empty()) out << "problem.arms = " << v.arms_gen << "\n";
    if (v.arms_gen.empty() && !v.arms.empty()) {
        for (std::size_t i = 0; i < v.arms.size(); ++i)
            out << "problem.arm_" << (i + 1) << " = " << join_doubles(v.arms[i]) << "\n";
    }
    if (!v.beta_gen.empty()) {
        out << "problem.beta_gen = " << v.beta_gen << "\n";
        out << "problem.beta_norm = " << format_double(v.beta_norm) << "\n";
    }
    if (v.sparsity) out << "problem.sparsity = " << *v.sparsity << "\n";
    if (v.support_gen == "random")
        out << "problem.support = random\n";
    else if (!v.support.empty())
        out << "problem.support = " << join_one_based(v.support) << "\n";
    if (!v.support_values.empty())
        out << "problem.support_values = " << join_doubles(v.support_values) << "\n";
    if (v.lambda_min) out << "problem.lambda_min = " << format_double(*v.lambda_min) << "\n";
    if (v.lambda_max) out << "problem.lambda_max = " << format_double(*v.lambda_max) << "\n";
    if (v.lambda_max_s_off)
        out << "problem.lambda_max_s_off = " << format_double(*v.lambda_max_s_off) << "\n";
    if (v.lambda_max_1_off)
        out << "problem.lambda_max_1_off = " << format_double(*v.lambda_max_1_off) << "\n";
    if (v.h) out << "problem.h = " << format_double(*v.h) << "\n";
    if (!v.optimal_arms.empty())
        out << "problem.optimal_arms = " << join_one_based(v.optimal_arms) << "\n";

    const char* ck = "iid_gaussian";
    switch (v.cov_kind) {
        case data::CovariateProcess::Kind::IidGaussian: ck = "iid_gaussian"; break;
        case data::CovariateProcess::Kind::SphereAR: ck = "sphere_ar"; break;
        case data::CovariateProcess::Kind::WeightedHistory: ck = "weighted_history"; break;
        case data::CovariateProcess::Kind::CorrelatedGaussian: ck = "correlated_gaussian"; break;
        case data::CovariateProcess::Kind::SignedLevels: ck = "signed_levels"; break;
    }
    out << "covariates.kind = " << ck << "\n";
    out << "covariates.init = "
        << (v.cov_init == data::CovariateProcess::Init::Gaussian ? "gaussian" : "unit_sphere")
        << "\n";
    out << "covariates.window = " << v.cov_window << "\n";
    out << "covariates.rho = " << format_double(v.cov_rho) << "\n";
    out << "covariates.levels = " << join_doubles(v.cov_levels) << "\n";
    out << "noise.kind = "
        << (v.noise_kind == data::NoiseProcess::Kind::IidGaussian ? "iid_gaussian"
                                                                  : "dependent_sign")
        << "\n";

    out << "stepsize.eta_const = " << format_double(v.eta_const) << "\n";
    out << "stepsize.c_a = " << format_double(v.c_a) << "\n";
    out << "stepsize.c_b = " << format_double(v.c_b) << "\n";
    out << "stepsize.t1 = " << v.stepsize_t1 << "\n";

    const char* ek = "constant";
    switch (v.explore_kind) {
        case sched::ExplorationSchedule::Kind::ConstantPi: ek = "constant"; break;
        case sched::ExplorationSchedule::Kind::Harmonic: ek = "harmonic"; break;
        case sched::ExplorationSchedule::Kind::Power: ek = "power"; break;
        case sched::ExplorationSchedule::Kind::TwoPhaseZero: ek = "two_phase_zero"; break;
        case sched::ExplorationSchedule::Kind::Rational: ek = "rational"; break;
        case sched::ExplorationSchedule::Kind::RationalSqrt: ek = "rational_sqrt"; break;
    }
    out << "exploration.kind = " << ek << "\n";
    out << "exploration.pi_bar = " << format_double(v.pi_bar) << "\n";
    out << "exploration.c_pi = " << format_double(v.c_pi) << "\n";
    out << "exploration.p = " << format_double(v.p) << "\n";
    out << "exploration.a = " << format_double(v.expl_a) << "\n";
    out << "exploration.b = " << format_double(v.expl_b) << "\n";
    out << "exploration.t1 = " << v.explore_t1 << "\n";
    out << "exploration.pre_rate = " << format_double(v.pre_rate) << "\n";
    out << "exploration.c_star = " << format_double(v.c_star) << "\n";

    out << "tail.kind = " << (v.tail_kind == sched::TailSequence::Kind::Zero ? "zero" : "log_t")
        << "\n";
    out << "tail.c = " << format_double(v.tail_c) << "\n";

    const char* sm = "heuristic";
    switch (v.sparse.mode) {
        case sgd::SparseMode::FixedSupport: sm = "fixed"; break;
        case sgd::SparseMode::OracleLocal: sm = "oracle_local"; break;
        case sgd::SparseMode::OracleCumulative: sm = "oracle_cumulative"; break;
        case sgd::SparseMode::Heuristic: sm = "heuristic"; break;
    }
    out << "sparse.mode = " << sm << "\n";
    out << "sparse.warmup = " << v.sparse.warmup_steps << "\n";
    out << "sparse.warmup_eta = " << format_double(v.sparse.warmup_eta) << "\n";
    out << "sparse.keep_top = " << v.sparse.keep_top << "\n";
    out << "sparse.rho = " << format_double(v.sparse.rho) << "\n";
    out << "sparse.min_gap = " << v.sparse.min_gap << "\n";
    out << "sparse.heuristic_stat = " << (v.sparse.heuristic_cumulative ? "cumulative" : "window")
        << "\n";
    out << "sparse.s_max = " << v.sparse.s_max << "\n";
    out << "sparse.c_sched = " << format_double(v.sparse.c_sched) << "\n";
    if (!v.sparse.initial_support.empty())
        out << "sparse.support_init = " << join_one_based(v.sparse.initial_support) << "\n";
    out << "sparse.compare_dense = " << (v.sparse.compare_dense ? "true" : "false") << "\n";

    out << "infer.t_eval = " << v.t_eval << "\n";
    out << "infer.level = " << format_double(v.level) << "\n";

    out << "verify.tau = " << v.verify_tau << "\n";
    out << "verify.pi = " << format_double(v.verify_pi) << "\n";
    out << "verify.h0 = " << format_double(v.verify_h0) << "\n";
    out << "verify.samples = " << v.verify_samples << "\n";
}

std::string render_canonical(const RunConfig& cfg) {
    std::ostringstream out;
    out << "[run]\n";
    out << "kind = " << cfg.kind << "\n";
    out << "seed = " << cfg.seed << "\n";
    out << "T = " << cfg.T << "\n";
    out << "replications = " << cfg.replications << "\n";
    out << "log_stride = " << cfg.log_stride << "\n";
    out << "out = " << cfg.out << "\n";
    out << "plot = " << (cfg.plot ? "true" : "false") << "\n";
    out << "jobs = " << cfg.jobs << "\n";
    out << "scale = 1\n";
    for (const auto& v : cfg.variants) {
        out << "[variant " << v.label << "]\n";
        render_variant(out, v);
    }
    return out.str();
}

}  // namespace

RunConfig parse_config(const std::string& text) {
    RawConfig raw = tokenize(text);

    RunConfig cfg;
    std::vector<std::pair<std::string, std::string>> base_plus = raw.base;
    for (const auto& kv : raw.overrides) base_plus.push_back(kv);
    KeyMap run_keys(base_plus);
    cfg.kind = run_keys.get_string("run.kind", "");
    if (cfg.kind.empty()) throw ConfigError("missing required key 'run.kind'");
    if (cfg.kind != "regress" && cfg.kind != "sparse" && cfg.kind != "bandit" &&
        cfg.kind != "infer" && cfg.kind != "verify")
        throw ConfigError("key 'run.kind': unknown experiment kind '" + cfg.kind + "'");
    cfg.seed = run_keys.get_u64("run.seed");
    cfg.T = run_keys.get_long("run.T", 10000);
    if (cfg.T < 0) throw ConfigError("key 'run.T': must be >= 0");
    cfg.replications = static_cast<int>(run_keys.get_long("run.replications", 1));
    if (cfg.replications < 1) throw ConfigError("key 'run.replications': must be >= 1");
    cfg.log_stride = run_keys.get_long("run.log_stride", 0);
    if (cfg.log_stride < 0) throw ConfigError("key 'run.log_stride': must be >= 0");
    cfg.out = run_keys.get_string("run.out", "out");
    cfg.plot = run_keys.get_bool("run.plot", false);
    cfg.jobs = static_cast<int>(run_keys.get_long("run.jobs", 1));
    if (cfg.jobs < 1) throw ConfigError("key 'run.jobs': must be >= 1");
    cfg.scale = run_keys.get_double("run.scale", 1.0);
    if (cfg.scale <= 0.0 || cfg.scale > 1.0) throw ConfigError("key 'run.scale': must be in (0,1]");

    if (cfg.scale != 1.0)
        cfg.T = std::max<long>(
            100, static_cast<long>(std::lround(static_cast<double>(cfg.T) * cfg.scale)));

    auto build = [&](const std::string& label,
                     const std::vector<std::pair<std::string, std::string>>& overrides) {
        std::vector<std::pair<std::string, std::string>> merged = raw.base;
        for (const auto& kv : overrides) merged.push_back(kv);
        for (const auto& kv : raw.overrides) merged.push_back(kv);
        KeyMap keys(merged);
        for (const char* k : {"run.kind", "run.seed", "run.T", "run.replications",
                              "run.log_stride", "run.out", "run.plot", "run.jobs", "run.scale"})
            keys.get_string(k, "");
        VariantConfig v = parse_variant(keys, label, cfg.kind);
        keys.check_all_consumed();
        if (cfg.scale != 1.0) {
            if (!v.arms.empty() || !v.support.empty())
                throw ConfigError("run.scale needs generated arms/support, not explicit lists");
            v.d = std::max(2, static_cast<int>(std::lround(v.d * cfg.scale)));
        }
        return v;
    };

    if (raw.variants.empty()) {
        cfg.variants.push_back(build("base", {}));
    } else {
        std::set<std::string> labels;
        for (const auto& [label, overrides] : raw.variants) {
            if (!labels.insert(label).second)
                throw ConfigError("duplicate variant label '" + label + "'");
            cfg.variants.push_back(build(label, overrides));
        }
    }

    cfg.canonical_text = render_canonical(cfg);
    cfg.config_hash = fnv1a(cfg.canonical_text);
    return cfg;
}

RunConfig parse_config_file(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw ConfigError("cannot open config file: " + path);
    std::ostringstream ss;
    ss << f.rdbuf();
    return parse_config(ss.str());
}

std::string override_key(const std::string& text, const std::string& dotted_key,
                         const std::string& value) {
    if (dotted_key.find('.') == std::string::npos)
        throw ConfigError("override key must be dotted: '" + dotted_key + "'");
    std::string out = text;
    if (!out.empty() && out.back() != '\n') out += '\n';
    out += "[override]\n" + dotted_key + " = " + value + "\n";
    return out;
}

}  // namespace depsgd::harness
