#include "cli.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "blm/benford.hpp"
#include "blm/criteria.hpp"
#include "blm/early_stop.hpp"
#include "blm/gpr.hpp"
#include "blm/model.hpp"
#include "blm/thermo.hpp"
#include "runs_csv.hpp"

namespace blm::cli {
namespace {

using nlohmann::ordered_json;

double round9(double v) {
    const std::string s = format_float(v);
    double r = 0.0;
    std::from_chars(s.data(), s.data() + s.size(), r);
    return r;
}

ordered_json json_number(std::optional<double> v) {
    if (!v || !std::isfinite(*v)) return nullptr;
    return round9(*v);
}

ordered_json bincount_json(const DigitHistogram& h) {
    ordered_json arr = ordered_json::array();
    for (double p : h.proportions()) arr.push_back(round9(p));
    return arr;
}

std::string csv_field(std::optional<double> v) { return v && std::isfinite(*v) ? format_float(*v) : std::string(); }

// ---------------------------------------------------------------- analyze

struct AnalyzeOptions {
    std::string manifest;
    std::string file;
    std::string file_format;
    std::optional<double> train_acc;
    bool per_layer = false;
    std::string format = "json";
};

TensorFormat format_from_extension(const std::filesystem::path& p) {
    const auto ext = p.extension().string();
    if (ext == ".npy") return TensorFormat::Npy;
    if (ext == ".csv" || ext == ".txt") return TensorFormat::Csv;
    if (ext == ".f32") return TensorFormat::RawF32;
    if (ext == ".f64" || ext == ".bin") return TensorFormat::RawF64;
    throw Error(ErrorKind::InvalidArgument, "cannot infer the format of '" + p.string() + "'; pass --file-format");
}

struct Overall {
    DigitHistogram histogram;
    double mlh;
    double jsd;
    std::optional<double> eic, eic_scaled, eic_sr;
};

Overall summarize(DigitHistogram hist, std::optional<double> train_acc) {
    if (hist.total() == 0) throw Error(ErrorKind::EmptyInput, "no nonzero finite values to analyze");
    Overall o{std::move(hist), 0.0, 0.0, {}, {}, {}};
    o.mlh = mlh(o.histogram).value;
    o.jsd = jsd_benford(o.histogram);
    if (train_acc) {
        o.eic = eic(*train_acc, o.mlh);
        o.eic_scaled = eic_scaled(*train_acc, o.mlh);
        if (*train_acc > 0.0 && o.mlh > 0.0) o.eic_sr = eic_sr(*train_acc, o.mlh);
    }
    return o;
}

void write_analysis_json(std::ostream& out, const std::string& model_name, const Overall& o,
                         const std::vector<LayerReport>& layers, bool with_layers) {
    ordered_json overall;
    overall["n_values"] = o.histogram.total();
    overall["excluded"] = o.histogram.excluded();
    overall["bincount"] = bincount_json(o.histogram);
    overall["mlh"] = json_number(o.mlh);
    overall["jsd"] = json_number(o.jsd);
    if (o.eic) {
        overall["eic"] = json_number(o.eic);
        overall["eic_scaled"] = json_number(o.eic_scaled);
        overall["eic_sr"] = json_number(o.eic_sr);
    }
    ordered_json doc;
    doc["model_name"] = model_name;
    doc["overall"] = std::move(overall);
    if (with_layers) {
        ordered_json arr = ordered_json::array();
        for (const auto& l : layers) {
            ordered_json j;
            j["name"] = l.name;
            j["n_values"] = l.histogram.total();
            j["excluded"] = l.histogram.excluded();
            j["bincount"] = bincount_json(l.histogram);
            j["mlh"] = json_number(l.mlh);
            j["jsd"] = json_number(l.jsd);
            arr.push_back(std::move(j));
        }
        doc["layers"] = std::move(arr);
    } else {
        doc["layers"] = ordered_json::array();
    }
    out << doc.dump(2) << '\n';
}

void write_analysis_csv(std::ostream& out, const std::string& model_name, const Overall& o,
                        const std::vector<LayerReport>& layers, bool with_layers) {
    out << "scope,name,n_values,excluded";
    for (int d = 0; d < 10; ++d) out << ",p" << d;
    out << ",mlh,jsd,eic,eic_scaled,eic_sr\n";
    auto row = [&](std::string_view scope, const std::string& name, const DigitHistogram& h,
                   std::optional<double> m, std::optional<double> j, std::optional<double> e,
                   std::optional<double> es, std::optional<double> esr) {
        out << scope << ',' << name << ',' << h.total() << ',' << h.excluded();
        for (double p : h.proportions()) out << ',' << format_float(p);
        out << ',' << csv_field(m) << ',' << csv_field(j) << ',' << csv_field(e) << ',' << csv_field(es) << ','
            << csv_field(esr) << '\n';
    };
    row("overall", model_name, o.histogram, o.mlh, o.jsd, o.eic, o.eic_scaled, o.eic_sr);
    if (with_layers)
        for (const auto& l : layers) row("layer", l.name, l.histogram, l.mlh, l.jsd, {}, {}, {});
}

int cmd_analyze(const AnalyzeOptions& opt, std::ostream& out) {
    if (opt.manifest.empty() == opt.file.empty())
        throw Error(ErrorKind::Usage, "analyze needs exactly one of --manifest or --file");
    if (opt.train_acc && !(*opt.train_acc >= 0.0 && *opt.train_acc <= 1.0))
        throw Error(ErrorKind::InvalidArgument, "--train-acc must be in [0, 1]");

    ModelManifest manifest;
    if (!opt.manifest.empty()) {
        manifest = load_manifest_file(opt.manifest);
    } else {
        const std::filesystem::path p(opt.file);
        TensorSource t;
        t.name = p.filename().string();
        t.path = std::filesystem::absolute(p);
        t.format = opt.file_format.empty() ? format_from_extension(p) : parse_tensor_format(opt.file_format);
        t.exclude = false;
        manifest.model_name = p.stem().string();
        manifest.tensors.push_back(std::move(t));
    }

    std::vector<LayerReport> layers;
    DigitHistogram hist(10);
    if (opt.per_layer) {
        layers = layerwise_report(manifest);
        for (const auto& l : layers) hist += l.histogram;
    } else {
        hist = model_histogram(manifest);
    }
    const Overall o = summarize(std::move(hist), opt.train_acc);
    if (opt.format == "csv")
        write_analysis_csv(out, manifest.model_name, o, layers, opt.per_layer);
    else
        write_analysis_json(out, manifest.model_name, o, layers, opt.per_layer);
    return kOk;
}

// ----------------------------------------------------------------- thermo

struct ThermoOptions {
    ThermoConfig config;
    std::string out_path;
};

int cmd_thermo(const ThermoOptions& opt, std::ostream& out) {
    const ThermoCurve curve = sweep(opt.config);
    std::ostringstream buf;
    buf << "beta,mlh\n";
    for (const auto& p : curve.points) buf << format_float(p.beta) << ',' << format_float(p.mlh) << '\n';
    if (opt.out_path.empty() || opt.out_path == "-") {
        out << buf.str();
        return kOk;
    }
    std::ofstream f(opt.out_path, std::ios::binary);
    if (!f) throw Error(ErrorKind::Io, "cannot create '" + opt.out_path + "'");
    f << buf.str();
    if (!f) throw Error(ErrorKind::Io, "cannot write '" + opt.out_path + "'");
    return kOk;
}

// ---------------------------------------------------------------- monitor

std::string_view trim(std::string_view s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string_view::npos) return {};
    const auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

int cmd_monitor(const StopConfig& config, std::istream& in, std::ostream& out) {
    StopMonitor monitor(config);
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const auto text = trim(line);
        if (text.empty()) continue;
        double v = 0.0;
        const char* first = text.data();
        if (*first == '+' && text.size() > 1) ++first;
        auto [ptr, ec] = std::from_chars(first, text.data() + text.size(), v);
        if (ec != std::errc() || ptr != text.data() + text.size())
            throw Error(ErrorKind::Parse, "line " + std::to_string(line_no) + ": not a number: '" + std::string(text) + "'");
        const auto decision = monitor.observe(v);
        out << to_string(decision) << '\n' << std::flush;
        if (decision == StopDecision::Stop) break;
    }
    return kOk;
}

// -------------------------------------------------------------- correlate

struct CorrelateOptions {
    std::string input;
    std::string y = "val_acc";
    std::string format = "json";
};

int cmd_correlate(const CorrelateOptions& opt, std::ostream& out) {
    const RunsTable table = read_runs_csv(opt.input);
    const auto y_col = table.column_index(opt.y);
    if (!y_col) throw Error(ErrorKind::Schema, "column '" + opt.y + "' not found in " + opt.input);

    std::vector<CorrelationRow> rows;
    for (std::size_t c = 0; c < table.header.size(); ++c) {
        const auto& name = table.header[c];
        if (c == *y_col || name == "step" || name == "train_acc" || name == "mlh") continue;
        std::vector<double> metric, target;
        for (const auto& r : table.rows)
            if (r[c] && r[*y_col]) {
                metric.push_back(*r[c]);
                target.push_back(*r[*y_col]);
            }
        if (metric.size() < 3) throw Error(ErrorKind::EmptyInput, "fewer than 3 complete rows for '" + name + "'");
        rows.push_back(spearman_row(name, metric, target));
    }

    const auto records = table.run_records(*y_col);
    std::size_t n_records = records.size();
    if (table.column_index("train_acc") && table.column_index("mlh")) {
        if (records.size() < 3) throw Error(ErrorKind::EmptyInput, "fewer than 3 records with " + opt.y);
        for (auto& r : correlation_table(records)) rows.push_back(std::move(r));
        if (records.size() >= 10)
            for (auto& r : gpr_correlation_rows(records)) rows.push_back(std::move(r));
    } else if (rows.empty()) {
        throw Error(ErrorKind::EmptyInput, "no metric columns to correlate");
    }

    if (opt.format == "csv") {
        out << "metric,spearman\n";
        for (const auto& r : rows) out << r.metric << ',' << csv_field(r.spearman) << '\n';
        return kOk;
    }
    ordered_json doc;
    doc["target"] = opt.y;
    doc["n_records"] = n_records;
    ordered_json arr = ordered_json::array();
    for (const auto& r : rows) arr.push_back({{"metric", r.metric}, {"spearman", json_number(r.spearman)}});
    doc["rows"] = std::move(arr);
    out << doc.dump(2) << '\n';
    return kOk;
}

}  // namespace

std::string format_float(double v) {
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 9);
    return std::string(buf, res.ptr);
}

int exit_code_for(ErrorKind kind) noexcept {
    switch (kind) {
        case ErrorKind::EmptyInput:
        case ErrorKind::UndefinedCorrelation: return kDegenerate;
        case ErrorKind::Domain:
        case ErrorKind::IllConditioned: return kNumericFailure;
        default: return kInputError;
    }
}

int run(const std::vector<std::string>& args, std::istream& in, std::ostream& out, std::ostream& err) {
    CLI::App app{"Benford's-law diagnostics for weight tensors and other numeric data", "blm"};
    app.require_subcommand(1);

    AnalyzeOptions analyze;
    auto* a = app.add_subcommand("analyze", "Digit histogram, MLH, JSD and EIC of a model or file");
    auto* a_manifest = a->add_option("--manifest", analyze.manifest, "Model manifest JSON");
    auto* a_file = a->add_option("--file", analyze.file, "Single tensor file (.npy, .csv, .f32, .f64)");
    a_manifest->excludes(a_file);
    a->add_option("--file-format", analyze.file_format, "Format of --file: npy, raw-f32, raw-f64, csv")
        ->check(CLI::IsMember({"npy", "raw-f32", "raw-f64", "csv"}));
    a->add_option("--train-acc", analyze.train_acc, "Train accuracy A in [0, 1]; enables the EIC fields");
    a->add_flag("--per-layer", analyze.per_layer, "Also report every included tensor");
    a->add_option("--format", analyze.format, "Output format")->check(CLI::IsMember({"json", "csv"}));

    ThermoOptions thermo;
    auto* t = app.add_subcommand("thermo", "MLH of Boltzmann-Gibbs energy samples across inverse temperatures");
    t->add_option("--beta-min", thermo.config.beta_min, "Smallest 1/kT")->capture_default_str();
    t->add_option("--beta-max", thermo.config.beta_max, "Largest 1/kT")->capture_default_str();
    t->add_option("--steps", thermo.config.steps, "Number of equally spaced betas")->capture_default_str();
    t->add_option("--samples", thermo.config.samples_per_step, "Energy samples per beta")->capture_default_str();
    t->add_option("--seed", thermo.config.seed, "RNG seed")->capture_default_str();
    t->add_option("--k", thermo.config.k, "Boltzmann constant")->capture_default_str();
    t->add_option("--out", thermo.out_path, "Output CSV path (default stdout)");

    StopConfig monitor;
    std::string mode = "max";
    auto* m = app.add_subcommand("monitor", "Early-stopping decisions for values read from stdin");
    m->add_option("--patience", monitor.patience, "Evaluations without improvement before stopping")
        ->capture_default_str();
    m->add_option("--mode", mode, "max or min")->check(CLI::IsMember({"max", "min"}))->capture_default_str();
    m->add_option("--min-delta", monitor.min_delta, "Required improvement")->capture_default_str();

    CorrelateOptions correlate;
    auto* c = app.add_subcommand("correlate", "Spearman correlation of run metrics with a target column");
    c->add_option("--input", correlate.input, "runs.csv")->required();
    c->add_option("--y", correlate.y, "Target column")->capture_default_str();
    c->add_option("--format", correlate.format, "Output format")->check(CLI::IsMember({"json", "csv"}));

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kOk;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return kOk;
    } catch (const CLI::ParseError& e) {
        err << "blm: " << e.what() << '\n';
        return kInputError;
    }

    try {
        if (*a) return cmd_analyze(analyze, out);
        if (*t) return cmd_thermo(thermo, out);
        if (*m) {
            monitor.mode = mode == "min" ? StopMode::Min : StopMode::Max;
            return cmd_monitor(monitor, in, out);
        }
        if (*c) return cmd_correlate(correlate, out);
    } catch (const Error& e) {
        err << "blm: " << e.what() << '\n';
        return exit_code_for(e.kind());
    } catch (const std::exception& e) {
        err << "blm: " << e.what() << '\n';
        return kNumericFailure;
    }
    return kInputError;
}

}  // namespace blm::cli
