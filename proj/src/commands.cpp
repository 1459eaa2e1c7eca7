#include "precursor/commands.hpp"

#include <filesystem>
#include <fstream>
#include <ostream>
#include <sstream>

#include "precursor/config.hpp"
#include "precursor/eval.hpp"
#include "precursor/io.hpp"
#include "precursor/pipeline.hpp"
#include "precursor/serialize.hpp"
#include "precursor/simgen.hpp"

namespace precursor::cli {
namespace fs = std::filesystem;

namespace {

void write_file(const fs::path& path, const std::string& content) {
    fs::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) {
        throw InputError("cannot write '" + path.string() + "'");
    }
    out << content;
}

RunConfig load_config(const CommonOptions& opt) {
    RunConfig cfg = opt.config.empty() ? parse_run_config(Json::object()) : load_run_config(opt.config);
    if (opt.out) cfg.io.outdir = *opt.out;
    cfg.pipeline.threads = std::max(1u, opt.threads);
    return cfg;
}

std::string require(const std::string& value, const char* what) {
    if (value.empty()) {
        throw InputError(std::string("missing ") + what);
    }
    return value;
}

// Maps the library's exception families onto exit codes.
template <typename Fn>
int guarded(std::ostream& log, Fn&& fn) {
    try {
        return fn();
    } catch (const NoTargetEventsError& e) {
        log << "error: " << e.what() << '\n';
        return kNoTargetEvents;
    } catch (const InputError& e) {
        log << "error: " << e.what() << '\n';
        return kInputError;
    } catch (const DataError& e) {
        log << "error: " << e.what() << '\n';
        return kInputError;
    } catch (const nlohmann::json::exception& e) {
        log << "error: " << e.what() << '\n';
        return kInputError;
    } catch (const fs::filesystem_error& e) {
        log << "error: " << e.what() << '\n';
        return kInputError;
    }
}

std::string detector_file_name(const SubspaceDetector& det) { return det.group.front() + ".json"; }

std::string curves_csv(const std::vector<CurvePoint>& curve) {
    std::ostringstream out;
    out << "nu,tp,fp,fn,tn,precision,recall,fpr\n";
    for (const auto& pt : curve) {
        out << io::format_real(pt.nu) << ',' << pt.tp << ',' << pt.fp << ',' << pt.fn << ',' << pt.tn << ','
            << io::format_real(pt.precision) << ',' << (pt.recall ? io::format_real(*pt.recall) : std::string{})
            << ',' << io::format_real(pt.fpr) << '\n';
    }
    return out.str();
}

}  // namespace

int cmd_simulate(const CommonOptions& opt, std::ostream& log) {
    return guarded(log, [&] {
        sim::SimConfig cfg = opt.config.empty() ? sim::SimConfig{} : load_sim_config(opt.config);
        if (opt.seed) cfg.seed = *opt.seed;
        if (!opt.out || opt.out->empty()) {
            throw InputError("simulate needs --out <dir>");
        }
        const auto fleet = sim::generate_fleet(cfg);
        const fs::path out(*opt.out);
        std::ostringstream telemetry, events;
        io::write_telemetry(telemetry, fleet.panels);
        io::write_events(events, fleet.events);
        Json manifest = to_json(fleet.manifest);
        manifest["config"] = to_json(cfg);
        write_file(out / "telemetry.csv", telemetry.str());
        write_file(out / "events.csv", events.str());
        write_file(out / "manifest.json", dump(manifest));
        log << "simulated " << fleet.panels.size() << " units, " << fleet.events.size() << " events into "
            << out.string() << '\n';
        return static_cast<int>(kOk);
    });
}

int cmd_run(const CommonOptions& opt, std::ostream& log) {
    return guarded(log, [&] {
        const RunConfig cfg = load_config(opt);
        const fs::path out(require(cfg.io.outdir, "io.outdir (or --out)"));
        const auto fleet = io::read_telemetry_file(require(cfg.io.telemetry, "io.telemetry"));
        const auto events = io::read_events_file(require(cfg.io.events, "io.events"));

        const auto model = fit_pipeline(fleet, events, cfg.pipeline);

        Json alarms = Json::array();
        for (std::size_t i = 0; i < model.alarms.size(); ++i) {
            alarms.push_back(Json{{"alarm_id", model.alarms[i].alarm_id},
                                  {"group", model.detectors[i].group},
                                  {"firings", model.alarms[i].total_firings()},
                                  {"stats", to_json(model.alarm_stats[i])}});
        }
        Json stats{{"target", cfg.pipeline.code_prefix},
                   {"match", {{"w", cfg.pipeline.match.w}, {"h", cfg.pipeline.match.h}, {"m", cfg.pipeline.match.m}}},
                   {"target_events", model.layout.events.size()},
                   {"dropped_events", model.layout.dropped.size()},
                   {"alarms", alarms},
                   {"skipped_groups", model.skipped_groups},
                   {"pooled", model.precursors.pooled_stats ? to_json(*model.precursors.pooled_stats) : Json(nullptr)}};

        std::vector<AlarmSeries> all = model.alarms;
        all.push_back(model.precursors.pooled);
        std::ostringstream alarms_csv;
        io::write_alarms(alarms_csv, all);

        write_file(out / "grouping.json", dump(to_json(model.grouping)));
        for (const auto& det : model.detectors) {
            write_file(out / "detectors" / detector_file_name(det), dump(to_json(det)));
        }
        write_file(out / "stats.json", dump(stats));
        write_file(out / "precursors.json", dump(to_json(model.precursors)));
        write_file(out / "alarms.csv", alarms_csv.str());

        log << model.precursors.combinations.size() << " precursor combination(s) selected\n";
        return static_cast<int>(model.precursors.combinations.empty() ? kEmptyPrecursors : kOk);
    });
}

int cmd_crossval(const CommonOptions& opt, std::ostream& log) {
    return guarded(log, [&] {
        const RunConfig cfg = load_config(opt);
        const fs::path out(require(cfg.io.outdir, "io.outdir (or --out)"));
        const auto fleet = io::read_telemetry_file(require(cfg.io.telemetry, "io.telemetry"));
        const auto events = io::read_events_file(require(cfg.io.events, "io.events"));

        const auto cv = leave_one_unit_out(fleet, events, cfg.pipeline);
        for (const auto& fold : cv.folds) {
            write_file(out / "folds" / (fold.held_out_unit + ".json"), dump(to_json(fold)));
        }
        write_file(out / "aggregate.json", dump(to_json(cv)));
        log << cv.folds.size() << " folds; aggregate cf="
            << (cv.aggregate_stats ? io::format_real(cv.aggregate_stats->cf) : std::string("n/a")) << '\n';
        return static_cast<int>(kOk);
    });
}

int cmd_curves(const CurvesOptions& opt, std::ostream& log) {
    return guarded(log, [&] {
        const RunConfig cfg = load_config(opt.common);
        const fs::path out(require(cfg.io.outdir, "io.outdir (or --out)"));
        const std::string events_path = opt.events ? *opt.events : cfg.io.events;
        const auto events = select_events(io::read_events_file(require(events_path, "io.events")),
                                          cfg.pipeline.code_prefix);
        const Flight tolerance = opt.tolerance ? *opt.tolerance : cfg.eval.tolerance;

        std::vector<ScoreSeries> scores;
        if (!opt.scores.empty()) {
            scores = io::read_scores_file(opt.scores);
        } else if (!opt.baseline.empty()) {
            const auto fleet = io::read_telemetry_file(require(cfg.io.telemetry, "io.telemetry"));
            const auto direction = parse_direction(opt.direction);
            for (const auto& panel : fleet) {
                scores.push_back(threshold_baseline(parameter_series(panel, opt.baseline), direction));
            }
        } else {
            throw InputError("curves needs --scores <file> or --baseline <parameter>");
        }

        if (!opt.features_out.empty()) {
            const auto fleet = io::read_telemetry_file(require(cfg.io.telemetry, "io.telemetry"));
            Fleet lagged;
            for (const auto& panel : fleet) lagged.push_back(lag_features(panel, cfg.eval.lag_depth));
            std::ostringstream csv;
            io::write_telemetry(csv, lagged);
            write_file(opt.features_out, csv.str());
        }

        const auto curve = roc_pr_curves(scores, events, tolerance);
        write_file(out / "curves.csv", curves_csv(curve));
        std::vector<CurvePoint> op;
        if (const auto* pt = nearest_point(curve, opt.nu)) op.push_back(*pt);
        const auto op_csv = curves_csv(op);
        write_file(out / "operating_point.csv", op_csv);
        log << "operating point nearest nu=" << opt.nu << ":\n" << op_csv;
        if (events.empty()) {
            log << "error: no target events; precision-recall is undefined (ROC columns written)\n";
            return static_cast<int>(kNoTargetEvents);
        }
        return static_cast<int>(kOk);
    });
}

}  // namespace precursor::cli
