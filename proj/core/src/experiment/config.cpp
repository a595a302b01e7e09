#include "hybridcast/experiment/config.hpp"

#include "hybridcast/error.hpp"
#include "hybridcast/experiment/methods.hpp"

#include <yaml-cpp/yaml.h>

#include <algorithm>
#include <cctype>
#include <fstream>
#include <set>
#include <sstream>

namespace hybridcast::experiment {

namespace {

[[noreturn]] void fail(const YAML::Node& node, const std::string& field, const std::string& what) {
    std::ostringstream msg;
    if (node.IsDefined() && node.Mark().line >= 0) {
        msg << "line " << node.Mark().line + 1 << ", ";
    }
    msg << "field '" << field << "': " << what;
    throw Error(ErrorCode::Config, msg.str());
}

void only_keys(const YAML::Node& node, const std::string& where, std::initializer_list<const char*> allowed) {
    if (!node.IsMap()) {
        fail(node, where, "expected a mapping");
    }
    const std::set<std::string> ok(allowed.begin(), allowed.end());
    for (const auto& kv : node) {
        const auto key = kv.first.as<std::string>();
        if (!ok.contains(key)) {
            fail(kv.first, where.empty() ? key : where + "." + key, "unknown key");
        }
    }
}

template <typename T>
T scalar(const YAML::Node& node, const std::string& field) {
    try {
        return node.as<T>();
    } catch (const YAML::Exception&) {
        fail(node, field, "invalid value '" + (node.IsScalar() ? node.Scalar() : std::string("<non-scalar>")) + "'");
    }
}

template <typename T>
void read(const YAML::Node& parent, const char* key, const std::string& where, T& out) {
    if (const auto n = parent[key]) {
        out = scalar<T>(n, where.empty() ? key : where + "." + key);
    }
}

template <typename T>
void read_list(const YAML::Node& parent, const char* key, const std::string& where, std::vector<T>& out) {
    const auto n = parent[key];
    if (!n) {
        return;
    }
    const std::string field = where.empty() ? key : where + "." + key;
    std::vector<T> values;
    if (n.IsSequence()) {
        for (const auto& item : n) {
            values.push_back(scalar<T>(item, field));
        }
    } else {
        values.push_back(scalar<T>(n, field));
    }
    if (values.empty()) {
        fail(n, field, "list must not be empty");
    }
    out = std::move(values);
}

std::string lower(std::string s) {
    std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return s;
}

Date read_date(const YAML::Node& n, const std::string& field) {
    try {
        return parse_date(scalar<std::string>(n, field));
    } catch (const Error&) {
        fail(n, field, "expected YYYY-MM-DD");
    }
}

void read_window(const YAML::Node& node, const std::string& where, WindowPlan& plan) {
    only_keys(node, where, {"train_months", "val_months", "test_months", "step_months", "start", "end"});
    read(node, "train_months", where, plan.train_months);
    read(node, "test_months", where, plan.test_months);
    read(node, "step_months", where, plan.step_months);
    if (const auto v = node["val_months"]) {
        std::vector<int> months;
        read_list(node, "val_months", where, months);
        if (months.size() != 3) {
            fail(v, where + ".val_months", "expected exactly three section lengths");
        }
        std::copy(months.begin(), months.end(), plan.val_months.begin());
    }
    if (const auto s = node["start"]) {
        plan.start = read_date(s, where + ".start");
    }
    if (const auto e = node["end"]) {
        plan.end = read_date(e, where + ".end");
    }
    try {
        plan.validate();
    } catch (const Error& e) {
        fail(node, where, e.what());
    }
}

AssetConfig read_asset(const YAML::Node& node, std::size_t index, const std::filesystem::path& base_dir) {
    const std::string where = "assets[" + std::to_string(index) + "]";
    only_keys(node, where,
              {"name", "data", "date_column", "close_column", "delimiter", "preset", "window", "tc", "trading_days"});
    AssetConfig a;
    read(node, "name", where, a.name);
    if (a.name.empty()) {
        fail(node, where + ".name", "required");
    }
    std::string data;
    read(node, "data", where, data);
    if (data.empty()) {
        fail(node, where + ".data", "required");
    }
    a.data = std::filesystem::path(data);
    if (a.data.is_relative() && !base_dir.empty()) {
        a.data = base_dir / a.data;
    }
    read(node, "date_column", where, a.csv.date_column);
    read(node, "close_column", where, a.csv.close_column);
    std::string delim;
    read(node, "delimiter", where, delim);
    if (!delim.empty()) {
        if (delim.size() != 1) {
            fail(node["delimiter"], where + ".delimiter", "expected a single character");
        }
        a.csv.delimiter = delim[0];
    }
    read(node, "preset", where, a.preset);
    a.preset = lower(a.preset);
    if (a.preset == "sp500") {
        a.plan = WindowPlan::sp500();
        a.trading_days = 252;
        a.tc = 0.00005;
    } else if (a.preset == "bitcoin") {
        a.plan = WindowPlan::bitcoin();
        a.trading_days = 365;
        a.tc = 0.0001;
    } else if (a.preset == "custom") {
        if (!node["window"]) {
            fail(node, where + ".window", "required for a custom preset");
        }
    } else {
        fail(node["preset"], where + ".preset", "expected sp500, bitcoin or custom");
    }
    if (const auto w = node["window"]) {
        read_window(w, where + ".window", a.plan);
    }
    read(node, "tc", where, a.tc);
    if (!(a.tc >= 0.0)) {
        fail(node["tc"], where + ".tc", "must be non-negative");
    }
    read(node, "trading_days", where, a.trading_days);
    if (a.trading_days <= 0) {
        fail(node["trading_days"], where + ".trading_days", "must be positive");
    }
    return a;
}

template <typename T>
void require_positive(const YAML::Node& node, const std::string& field, const std::vector<T>& values) {
    for (const auto v : values) {
        if (!(v > T{})) {
            fail(node, field, "values must be positive");
        }
    }
}

void read_grids(const YAML::Node& node, GridConfig& g) {
    only_keys(node, "grids", {"lags", "svr", "gbt", "lstm"});
    read_list(node, "lags", "grids", g.lags);
    require_positive(node["lags"], "grids.lags", g.lags);
    if (const auto s = node["svr"]) {
        only_keys(s, "grids.svr", {"C", "epsilon", "kernel", "degree"});
        read_list(s, "C", "grids.svr", g.svr_c);
        require_positive(s["C"], "grids.svr.C", g.svr_c);
        read_list(s, "epsilon", "grids.svr", g.svr_epsilon);
        for (const double e : g.svr_epsilon) {
            if (!(e >= 0.0)) {
                fail(s["epsilon"], "grids.svr.epsilon", "values must be non-negative");
            }
        }
        std::vector<std::string> kernels;
        read_list(s, "kernel", "grids.svr", kernels);
        if (!kernels.empty()) {
            g.svr_kernels.clear();
            for (const auto& k : kernels) {
                try {
                    g.svr_kernels.push_back(parse_kernel(k));
                } catch (const Error& e) {
                    fail(s["kernel"], "grids.svr.kernel", e.what());
                }
            }
        }
        read(s, "degree", "grids.svr", g.svr_degree);
    }
    if (const auto b = node["gbt"]) {
        only_keys(b, "grids.gbt", {"trees", "depth", "learning_rate", "lambda", "gamma"});
        read_list(b, "trees", "grids.gbt", g.gbt_trees);
        read_list(b, "depth", "grids.gbt", g.gbt_depth);
        read_list(b, "learning_rate", "grids.gbt", g.gbt_learning_rate);
        require_positive(b["learning_rate"], "grids.gbt.learning_rate", g.gbt_learning_rate);
        read(b, "lambda", "grids.gbt", g.gbt_lambda);
        read(b, "gamma", "grids.gbt", g.gbt_gamma);
    }
    if (const auto l = node["lstm"]) {
        only_keys(l, "grids.lstm", {"hidden", "sequence", "epochs", "learning_rate", "batch"});
        read_list(l, "hidden", "grids.lstm", g.lstm_hidden);
        require_positive(l["hidden"], "grids.lstm.hidden", g.lstm_hidden);
        read_list(l, "sequence", "grids.lstm", g.lstm_sequence);
        require_positive(l["sequence"], "grids.lstm.sequence", g.lstm_sequence);
        read_list(l, "epochs", "grids.lstm", g.lstm_epochs);
        read_list(l, "learning_rate", "grids.lstm", g.lstm_learning_rate);
        read(l, "batch", "grids.lstm", g.lstm_batch);
        if (g.lstm_batch == 0) {
            fail(l["batch"], "grids.lstm.batch", "must be positive");
        }
    }
}

}  // namespace

KernelType parse_kernel(std::string_view name) {
    const std::string k = lower(std::string(name));
    if (k == "linear") {
        return KernelType::Linear;
    }
    if (k == "rbf") {
        return KernelType::Rbf;
    }
    if (k == "poly" || k == "polynomial") {
        return KernelType::Polynomial;
    }
    throw Error(ErrorCode::Config, "unknown kernel '" + std::string(name) + "'");
}

ExperimentConfig parse_config(std::string_view text, const std::filesystem::path& base_dir) {
    YAML::Node root;
    try {
        root = YAML::Load(std::string(text));
    } catch (const YAML::ParserException& e) {
        throw Error(ErrorCode::Config, "line " + std::to_string(e.mark.line + 1) + ": " + e.msg);
    }
    if (!root.IsMap()) {
        throw Error(ErrorCode::Config, "config must be a mapping");
    }
    only_keys(root, "", {"seed", "output", "jobs", "audit", "plots", "assets", "methods", "econometric", "grids"});
    ExperimentConfig cfg;
    cfg.source_text = std::string(text);
    read(root, "seed", "", cfg.seed);
    std::string output;
    read(root, "output", "", output);
    if (!output.empty()) {
        cfg.output = output;
    }
    read(root, "jobs", "", cfg.jobs);
    read(root, "audit", "", cfg.audit);
    if (const auto p = root["plots"]) {
        only_keys(p, "plots", {"log_scale"});
        read(p, "log_scale", "plots", cfg.log_scale);
    }

    const auto assets = root["assets"];
    if (!assets || !assets.IsSequence() || assets.size() == 0) {
        fail(assets ? assets : root, "assets", "expected a non-empty list");
    }
    std::set<std::string> names;
    for (std::size_t i = 0; i < assets.size(); ++i) {
        auto a = read_asset(assets[i], i, base_dir);
        if (!names.insert(a.name).second) {
            fail(assets[i], "assets[" + std::to_string(i) + "].name", "duplicate asset name '" + a.name + "'");
        }
        cfg.assets.push_back(std::move(a));
    }

    const auto methods = root["methods"];
    if (!methods || !methods.IsSequence() || methods.size() == 0) {
        fail(methods ? methods : root, "methods", "expected a non-empty list");
    }
    read_list(root, "methods", "", cfg.methods);
    for (std::size_t i = 0; i < cfg.methods.size(); ++i) {
        try {
            parse_method(cfg.methods[i]);
        } catch (const Error& e) {
            fail(methods[i], "methods[" + std::to_string(i) + "]", e.what());
        }
    }

    if (const auto e = root["econometric"]) {
        only_keys(e, "econometric", {"p_max", "d_max", "q_max", "arfima_truncation", "arfima_d_grid", "arfima_refine"});
        read(e, "p_max", "econometric", cfg.bounds.p_max);
        read(e, "d_max", "econometric", cfg.bounds.d_max);
        read(e, "q_max", "econometric", cfg.bounds.q_max);
        if (cfg.bounds.p_max < 0 || cfg.bounds.d_max < 0 || cfg.bounds.q_max < 0) {
            fail(e, "econometric", "order bounds must be non-negative");
        }
        read(e, "arfima_truncation", "econometric", cfg.arfima.truncation);
        read_list(e, "arfima_d_grid", "econometric", cfg.arfima.d_grid);
        read(e, "arfima_refine", "econometric", cfg.arfima.refine);
    }
    if (const auto g = root["grids"]) {
        read_grids(g, cfg.grids);
    }
    return cfg;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw Error(ErrorCode::Io, "cannot open config " + path.string());
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_config(buf.str(), path.parent_path());
}

}  // namespace hybridcast::experiment
