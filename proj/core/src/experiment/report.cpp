#include "hybridcast/experiment/report.hpp"

#include "hybridcast/error.hpp"
#include "hybridcast/experiment/svg.hpp"

#include <Eigen/Core>
#include <nlohmann/json.hpp>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

#ifndef HYBRIDCAST_VERSION
#define HYBRIDCAST_VERSION "unknown"
#endif

namespace hybridcast::experiment {

namespace {

namespace fs = std::filesystem;

std::string fmt(const char* pattern, double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, pattern, v);
    return buf;
}

std::string pct(double v, int digits) {
    if (!std::isfinite(v)) {
        return "-";
    }
    return fmt(digits == 4 ? "%.4f%%" : "%.2f%%", 100.0 * v);
}

std::string ratio(double v) { return std::isfinite(v) ? fmt("%.2f", v) : "-"; }

std::string slug(const std::string& s) {
    std::string out;
    for (const char c : s) {
        const bool keep = (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') || c == '-' ||
                          c == '_';
        out.push_back(keep ? c : '_');
    }
    return out;
}

// Labels may contain commas in principle; quote when needed.
std::string csv_field(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) {
        return s;
    }
    std::string out = "\"";
    for (const char c : s) {
        if (c == '"') {
            out += "\"\"";
        } else {
            out.push_back(c);
        }
    }
    return out + "\"";
}

class Writer {
public:
    explicit Writer(fs::path dir) : dir_(std::move(dir)) {}

    void write(const std::string& name, const std::string& content) {
        const fs::path path = dir_ / name;
        std::ofstream out(path, std::ios::binary | std::ios::trunc);
        if (!out) {
            throw Error(ErrorCode::Io, "cannot write " + path.string());
        }
        out << content;
        out.close();
        if (!out) {
            throw Error(ErrorCode::Io, "write failed for " + path.string());
        }
        files_.push_back(name);
    }

    const std::vector<std::string>& files() const { return files_; }

private:
    fs::path dir_;
    std::vector<std::string> files_;
};

struct Line {
    std::string label;
    const BacktestResult* bt;
};

std::string equity_csv(const std::vector<Line>& lines) {
    std::ostringstream out;
    out << "date,method,equity\n";
    for (const auto& l : lines) {
        out << format_date(l.bt->origin) << ',' << csv_field(l.label) << ',' << fmt("%.10f", l.bt->equity[0]) << '\n';
        for (std::size_t i = 0; i < l.bt->dates.size(); ++i) {
            out << format_date(l.bt->dates[i]) << ',' << csv_field(l.label) << ','
                << fmt("%.10f", l.bt->equity[i + 1]) << '\n';
        }
    }
    return out.str();
}

std::string metrics_csv(const std::vector<Line>& lines) {
    std::ostringstream out;
    out << kMetricsHeader << '\n';
    for (const auto& l : lines) {
        out << metrics_row(l.label, l.bt->metrics) << '\n';
    }
    return out.str();
}

std::string chart(const std::string& title, const std::vector<Line>& lines, bool log_scale) {
    std::vector<PlotLine> plot;
    for (const auto& l : lines) {
        PlotLine p;
        p.label = l.label;
        p.dates.push_back(l.bt->origin);
        p.dates.insert(p.dates.end(), l.bt->dates.begin(), l.bt->dates.end());
        p.values = l.bt->equity;
        plot.push_back(std::move(p));
    }
    return render_line_chart(title, plot, log_scale);
}

void emit_strategy(Writer& w, const std::string& prefix, const std::string& title, StrategyMode mode,
                   const std::vector<Line>& lines, bool log_scale) {
    const std::string base = prefix + "_" + std::string(to_string(mode));
    w.write(base + "_metrics.csv", metrics_csv(lines));
    w.write(base + "_equity.csv", equity_csv(lines));
    w.write(base + "_equity.svg", chart(title + " (" + std::string(to_string(mode)) + ")", lines, log_scale));
}

std::string descriptive_csv(const DescriptiveStats& s) {
    std::ostringstream out;
    out << "statistic,value\n";
    out << "count," << s.count << '\n';
    const std::pair<const char*, double> rows[] = {{"min", s.min},   {"q1", s.q1},   {"median", s.median},
                                                   {"mean", s.mean}, {"q3", s.q3},   {"max", s.max},
                                                   {"std", s.std},   {"skewness", s.skewness},
                                                   {"kurtosis", s.kurtosis}};
    for (const auto& [name, v] : rows) {
        out << name << ',' << fmt("%.10g", v) << '\n';
    }
    return out.str();
}

std::string forecasts_csv(const AssetResult& a) {
    std::ostringstream out;
    out << "date,method,forecast,actual\n";
    for (const auto& m : a.methods) {
        if (!m.walk_forward) {
            continue;
        }
        const auto& f = m.walk_forward->forecasts;
        const auto& act = m.walk_forward->actuals;
        for (std::size_t i = 0; i < f.size(); ++i) {
            out << format_date(f.dates()[i]) << ',' << csv_field(m.label) << ',' << fmt("%.12e", f[i]) << ','
                << fmt("%.12e", act[i]) << '\n';
        }
    }
    return out.str();
}

std::string windows_csv(const AssetResult& a) {
    std::ostringstream out;
    out << "method,window,train_begin,val_end,test_begin,test_end,chosen,mean_val_rmse\n";
    for (const auto& m : a.methods) {
        if (!m.walk_forward) {
            continue;
        }
        for (const auto& w : m.walk_forward->windows) {
            const auto& r = w.report;
            out << csv_field(m.label) << ',' << w.split.index << ',' << format_date(w.split.train.begin) << ','
                << format_date(w.split.val[2].end) << ',' << format_date(w.split.test.begin) << ','
                << format_date(w.split.test.end) << ',' << csv_field(r.chosen_description) << ','
                << fmt("%.10e", r.mean_scores[r.chosen]) << '\n';
        }
    }
    return out.str();
}

}  // namespace

std::string metrics_row(const std::string& label, const Metrics& m) {
    std::ostringstream out;
    out << csv_field(label) << ',' << pct(m.rmse, 4) << ',' << pct(m.mae, 4) << ',' << pct(m.arc, 2) << ','
        << pct(m.asd, 2) << ',' << pct(m.md, 2) << ',' << ratio(m.ir) << ',' << ratio(m.ir_star) << ','
        << ratio(m.sortino);
    return out.str();
}

std::string format_descriptive(const std::string& name, const DescriptiveStats& s) {
    std::ostringstream out;
    out << name << " daily log returns (n = " << s.count << ")\n";
    const std::pair<const char*, double> pcts[] = {{"min", s.min},   {"q1", s.q1}, {"median", s.median},
                                                   {"mean", s.mean}, {"q3", s.q3}, {"max", s.max},
                                                   {"std", s.std}};
    for (const auto& [label, v] : pcts) {
        out << "  " << label << std::string(10 - std::string(label).size(), ' ') << fmt("%9.4f%%", 100.0 * v) << '\n';
    }
    out << "  skewness  " << fmt("%9.4f", s.skewness) << '\n';
    out << "  kurtosis  " << fmt("%9.4f", s.kurtosis) << "  (excess)\n";
    return out.str();
}

std::vector<std::string> emit_reports(const RunResult& result, const ExperimentConfig& cfg,
                                      const fs::path& outdir) {
    bool any = false;
    for (const auto& a : result.assets) {
        any = any || !a.methods.empty();
    }
    if (!any) {
        throw Error(ErrorCode::InvalidArgument, "no results to report");
    }
    std::error_code ec;
    fs::create_directories(outdir, ec);
    if (ec) {
        throw Error(ErrorCode::Io, "cannot create " + outdir.string() + ": " + ec.message());
    }
    Writer w(outdir);
    nlohmann::ordered_json manifest;
    manifest["config_hash"] = fnv1a_hex(cfg.source_text + "\nseed=" + std::to_string(cfg.seed));
    manifest["seed"] = cfg.seed;
    manifest["versions"] = {{"hybridcast", HYBRIDCAST_VERSION},
                            {"eigen", std::to_string(EIGEN_WORLD_VERSION) + "." + std::to_string(EIGEN_MAJOR_VERSION) +
                                          "." + std::to_string(EIGEN_MINOR_VERSION)},
                            {"compiler", __VERSION__},
                            {"cplusplus", __cplusplus}};
    manifest["total_seconds"] = result.seconds;
    manifest["assets"] = nlohmann::ordered_json::array();
    auto failures = nlohmann::ordered_json::array();

    for (const auto& a : result.assets) {
        const std::string prefix = slug(a.asset.name);
        for (std::size_t s = 0; s < kStrategies.size(); ++s) {
            std::vector<Line> lines;
            for (const auto& m : a.methods) {
                if (!m.failed()) {
                    lines.push_back({m.label, &m.backtests[s]});
                }
            }
            if (!lines.empty()) {
                emit_strategy(w, prefix, a.asset.name, kStrategies[s], lines, cfg.log_scale);
            }
        }
        w.write(prefix + "_descriptive.csv", descriptive_csv(a.stats));
        w.write(prefix + "_forecasts.csv", forecasts_csv(a));
        w.write(prefix + "_windows.csv", windows_csv(a));

        nlohmann::ordered_json ja;
        ja["name"] = a.asset.name;
        ja["data"] = a.asset.data.string();
        ja["windows"] = a.windows.size();
        ja["methods"] = nlohmann::ordered_json::array();
        for (const auto& m : a.methods) {
            nlohmann::ordered_json jm;
            jm["label"] = m.label;
            jm["seconds"] = m.seconds;
            jm["failed"] = m.failed();
            if (m.failed()) {
                jm["error"] = m.error;
                failures.push_back({{"asset", a.asset.name}, {"method", m.label}, {"error", m.error}});
            }
            if (m.walk_forward) {
                auto jw = nlohmann::ordered_json::array();
                for (const auto& win : m.walk_forward->windows) {
                    jw.push_back({{"window", win.split.index},
                                  {"test_begin", format_date(win.split.test.begin)},
                                  {"chosen", win.report.chosen_description},
                                  {"forecasts", win.forecasts},
                                  {"seconds", win.seconds}});
                }
                jm["windows"] = std::move(jw);
                if (cfg.audit) {
                    const auto& au = m.walk_forward->audit;
                    jm["audit"] = {{"checked", au.checked}, {"violations", au.violations},
                                   {"max_abs_diff", au.max_abs_diff}};
                }
            }
            ja["methods"].push_back(std::move(jm));
        }
        manifest["assets"].push_back(std::move(ja));
    }

    if (!result.portfolio.empty()) {
        for (std::size_t s = 0; s < kStrategies.size(); ++s) {
            std::vector<Line> lines;
            for (const auto& row : result.portfolio) {
                lines.push_back({row.label, &row.backtests[s]});
            }
            emit_strategy(w, "portfolio", "Equally weighted portfolio", kStrategies[s], lines, cfg.log_scale);
        }
    }

    manifest["failures"] = std::move(failures);
    std::vector<std::string> files = w.files();
    files.push_back("manifest.json");
    manifest["files"] = files;
    w.write("manifest.json", manifest.dump(2) + "\n");
    return files;
}

}  // namespace hybridcast::experiment
