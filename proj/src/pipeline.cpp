#include "hhc/pipeline.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <set>

#include "hhc/analyze.hpp"
#include "hhc/csv.hpp"
#include "hhc/dates.hpp"
#include "hhc/errors.hpp"
#include "hhc/geo.hpp"
#include "hhc/ingest.hpp"
#include "hhc/relieff.hpp"
#include "json.hpp"

namespace hhc {

namespace {

namespace fs = std::filesystem;
using nlohmann::ordered_json;

template <typename F>
void with_stage(const char* stage, F&& body) {
  const auto tag = [stage](const char* what) {
    return std::string(stage) + ": " + what;
  };
  try {
    body();
  } catch (const InputError& e) {
    throw InputError(tag(e.what()));
  } catch (const JoinError& e) {
    throw JoinError(tag(e.what()));
  } catch (const InferenceError& e) {
    throw InferenceError(tag(e.what()));
  } catch (const ConfigError& e) {
    throw ConfigError(tag(e.what()));
  }
}

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw InputError("cannot write " + path);
  return out;
}

std::string fmt(const char* f, double v) {
  char buf[48];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

/// Facility metadata plus its resolved grid cell and reporting city.
struct FacilityContext {
  FacilityMeta meta;
  GridElement grid;
  std::string city;
};

std::map<std::string, FacilityContext> resolve_facilities(
    const PipelineConfig& cfg, const FluTable& flu) {
  const std::vector<FacilityMeta> metas = load_facilities(cfg.facilities);
  const CentroidTable centroids = load_centroids(cfg.centroids);
  std::map<std::string, FacilityContext> out;
  for (const auto& m : metas) {
    FacilityContext ctx;
    ctx.meta = m;
    const LatLon loc = zip_to_centroid(m.zipcode, centroids, m.facility_id);
    ctx.grid = latlon_to_grid(loc.latitude, loc.longitude);
    ctx.city = nearest_reporting_city(loc, flu.cities);
    out.emplace(m.facility_id, std::move(ctx));
  }
  return out;
}

}  // namespace

StagePaths stage_paths(const std::string& out_dir) {
  StagePaths p;
  p.shifts_kept = out_dir + "/shifts_kept.csv";
  p.shifts_dropped = out_dir + "/shifts_dropped.csv";
  p.facility_summary = out_dir + "/facility_summary.csv";
  p.joined = out_dir + "/joined.csv";
  p.design = out_dir + "/design.csv";
  p.design_scaling = out_dir + "/design_scaling.csv";
  p.relief_design = out_dir + "/relief_design.csv";
  p.hypothesis = out_dir + "/hypothesis.json";
  p.ranking = out_dir + "/relief_ranking.csv";
  p.margins_dir = out_dir + "/margins";
  p.ttest = out_dir + "/ttest.csv";
  p.report = out_dir + "/report.json";
  return p;
}

std::vector<ShiftRecord> read_shift_records(const std::string& path) {
  const csv::Table t = csv::read_file(path);
  const std::size_t c_fac = t.column("facility_id");
  const std::size_t c_date = t.column("shift_date");
  const std::size_t c_night = t.column("night_shift");
  const std::size_t c_door = t.column("door_count");
  const std::size_t c_disp = t.column("dispenser_count");
  const std::size_t c_comp = t.column("compliance");
  std::vector<ShiftRecord> out;
  out.reserve(t.rows.size());
  for (std::size_t i = 0; i < t.rows.size(); ++i) {
    ShiftRecord r;
    r.facility_id = t.rows[i][c_fac];
    r.shift_date = parse_date(t.rows[i][c_date],
                              path + ":" + std::to_string(t.lines[i]));
    r.night_shift = static_cast<int>(csv::to_int(t, i, c_night));
    r.door_count = csv::to_int(t, i, c_door);
    r.dispenser_count = csv::to_int(t, i, c_disp);
    r.compliance = csv::to_double(t, i, c_comp);
    out.push_back(std::move(r));
  }
  return out;
}

std::vector<JoinedShift> read_joined(const std::string& path) {
  const csv::Table t = csv::read_file(path);
  const std::size_t c_fac = t.column("facility_id");
  const std::size_t c_date = t.column("shift_date");
  const std::size_t c_night = t.column("night_shift");
  const std::size_t c_door = t.column("door_count");
  const std::size_t c_disp = t.column("dispenser_count");
  const std::size_t c_comp = t.column("compliance");
  const std::size_t c_temp = t.column("air_temp_k");
  const std::size_t c_hum = t.column("rel_humidity_pct");
  const std::size_t c_sev = t.column("flu_severity");
  std::vector<JoinedShift> out;
  out.reserve(t.rows.size());
  for (std::size_t i = 0; i < t.rows.size(); ++i) {
    JoinedShift j;
    j.shift.facility_id = t.rows[i][c_fac];
    j.shift.shift_date = parse_date(t.rows[i][c_date],
                                    path + ":" + std::to_string(t.lines[i]));
    j.shift.night_shift = static_cast<int>(csv::to_int(t, i, c_night));
    j.shift.door_count = csv::to_int(t, i, c_door);
    j.shift.dispenser_count = csv::to_int(t, i, c_disp);
    j.shift.compliance = csv::to_double(t, i, c_comp);
    j.air_temp_k = csv::to_double(t, i, c_temp);
    j.rel_humidity_pct = csv::to_double(t, i, c_hum);
    j.flu_severity = csv::to_double(t, i, c_sev);
    out.push_back(std::move(j));
  }
  return out;
}

DesignMatrix read_design(const std::string& design_path,
                         const std::string& scaling_path) {
  const csv::Table t = csv::read_file(design_path);
  if (t.header.empty() || t.header.back() != "compliance")
    throw InputError(design_path + ": last column must be 'compliance'");
  DesignMatrix d;
  const std::size_t p = t.header.size() - 1;
  d.feature_names.assign(t.header.begin(), t.header.end() - 1);
  d.X.resize(static_cast<Eigen::Index>(t.rows.size()),
             static_cast<Eigen::Index>(p));
  d.y.resize(static_cast<Eigen::Index>(t.rows.size()));
  for (std::size_t i = 0; i < t.rows.size(); ++i) {
    for (std::size_t j = 0; j < p; ++j)
      d.X(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
          csv::to_double(t, i, j);
    d.y(static_cast<Eigen::Index>(i)) = csv::to_double(t, i, p);
  }

  const csv::Table s = csv::read_file(scaling_path);
  const std::size_t c_feat = s.column("feature");
  const std::size_t c_mean = s.column("mean");
  const std::size_t c_scale = s.column("scale");
  const std::size_t c_kind = s.column("kind");
  if (s.rows.size() != p)
    throw InputError(scaling_path + ": expected " + std::to_string(p) +
                     " feature rows");
  d.column_means.resize(p);
  d.column_scales.resize(p);
  d.kinds.resize(p);
  for (std::size_t i = 0; i < p; ++i) {
    if (s.rows[i][c_feat] != d.feature_names[i])
      throw InputError(scaling_path + ": feature order differs from " +
                       design_path);
    d.column_means[i] = csv::to_double(s, i, c_mean);
    d.column_scales[i] = csv::to_double(s, i, c_scale);
    const std::string& kind = s.rows[i][c_kind];
    if (kind == "continuous")
      d.kinds[i] = ColumnKind::continuous;
    else if (kind == "binary")
      d.kinds[i] = ColumnKind::binary;
    else
      throw InputError(scaling_path + ": unknown column kind '" + kind + "'");
  }
  return d;
}

Hypothesis read_hypothesis(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open " + path);
  ordered_json j;
  try {
    in >> j;
  } catch (const std::exception& e) {
    throw InputError(path + ": " + e.what());
  }
  Hypothesis h;
  h.intercept = j.at("intercept").get<double>();
  h.lambda = j.at("lambda").get<double>();
  const auto& features = j.at("features");
  h.coefficients.resize(static_cast<Eigen::Index>(features.size()));
  h.p_values.resize(static_cast<Eigen::Index>(features.size()));
  Eigen::Index i = 0;
  for (const auto& [name, entry] : features.items()) {
    h.feature_names.push_back(name);
    h.coefficients(i) = entry.at("coefficient").get<double>();
    h.p_values(i) = entry.at("p_value").get<double>();
    ++i;
  }
  return h;
}

void run_ingest(const PipelineConfig& cfg) {
  with_stage("ingest", [&] {
    fs::create_directories(cfg.out);
    const StagePaths paths = stage_paths(cfg.out);
    const std::vector<FacilityMeta> metas = load_facilities(cfg.facilities);
    const std::vector<EventRecord> events = load_events(cfg.events, metas);
    const std::vector<ShiftRecord> shifts = aggregate_shifts(events);
    const FilterResult filtered = filter_shifts(shifts);

    {
      auto out = open_out(paths.shifts_kept);
      csv::write_row(out, {"facility_id", "shift_date", "night_shift",
                           "door_count", "dispenser_count", "compliance"});
      for (const auto& r : filtered.kept)
        csv::write_row(out, {r.facility_id, iso_date(r.shift_date),
                             std::to_string(r.night_shift),
                             std::to_string(r.door_count),
                             std::to_string(r.dispenser_count),
                             csv::format_double(r.compliance)});
    }
    {
      auto out = open_out(paths.shifts_dropped);
      csv::write_row(out,
                     {"facility_id", "shift_date", "night_shift", "door_count",
                      "dispenser_count", "compliance", "drop_reason"});
      for (const auto& d : filtered.dropped) {
        const auto& r = d.record;
        csv::write_row(out, {r.facility_id, iso_date(r.shift_date),
                             std::to_string(r.night_shift),
                             std::to_string(r.door_count),
                             std::to_string(r.dispenser_count),
                             csv::format_double(r.compliance),
                             drop_reason_name(d.reason)});
      }
    }
    {
      std::map<std::string, const FacilityMeta*> meta_by_id;
      for (const auto& m : metas) meta_by_id[m.facility_id] = &m;
      struct Acc {
        std::int64_t door = 0, disp = 0;
        std::set<std::int64_t> days;
      };
      std::map<std::string, Acc> acc;
      for (const auto& r : filtered.kept) {
        Acc& a = acc[r.facility_id];
        a.door += r.door_count;
        a.disp += r.dispenser_count;
        a.days.insert(to_days(r.shift_date));
      }
      auto out = open_out(paths.facility_summary);
      csv::write_row(out, {"facility_id", "state", "cdc_division",
                           "dispenser_total", "door_total", "compliance",
                           "reporting_days"});
      std::int64_t door_sum = 0, disp_sum = 0, day_sum = 0;
      std::set<std::string> states, divisions;
      for (const auto& [fid, a] : acc) {
        const FacilityMeta* m = meta_by_id.at(fid);
        states.insert(m->state);
        divisions.insert(m->cdc_division);
        door_sum += a.door;
        disp_sum += a.disp;
        day_sum += static_cast<std::int64_t>(a.days.size());
        csv::write_row(out, {fid, m->state, m->cdc_division,
                             std::to_string(a.disp), std::to_string(a.door),
                             fmt("%.4f", compliance_rate(a.disp, a.door)),
                             std::to_string(a.days.size())});
      }
      csv::write_row(out, {"TOTAL", std::to_string(states.size()),
                           std::to_string(divisions.size()),
                           std::to_string(disp_sum), std::to_string(door_sum),
                           fmt("%.4f", compliance_rate(disp_sum, door_sum)),
                           std::to_string(day_sum)});
    }
  });
}

void run_features(const PipelineConfig& cfg) {
  with_stage("features", [&] {
    fs::create_directories(cfg.out);
    const StagePaths paths = stage_paths(cfg.out);
    const std::vector<ShiftRecord> kept = read_shift_records(paths.shifts_kept);
    const FluTable flu = load_flu(cfg.flu);
    const WeatherTable weather = WeatherTable::load(cfg.weather);
    const std::map<std::string, FacilityContext> facilities =
        resolve_facilities(cfg, flu);

    std::vector<JoinedShift> joined;
    joined.reserve(kept.size());
    for (const auto& shift : kept) {
      const auto it = facilities.find(shift.facility_id);
      if (it == facilities.end())
        throw JoinError("shift references unknown facility '" +
                        shift.facility_id + "'");
      try {
        JoinedShift j;
        j.shift = shift;
        const auto [temp, hum] = join_weather(shift, it->second.grid, weather);
        j.air_temp_k = temp;
        j.rel_humidity_pct = hum;
        j.flu_severity =
            flu_lookup(flu, it->second.city, mmwr_week(shift.shift_date));
        joined.push_back(std::move(j));
      } catch (const JoinError& e) {
        std::cerr << "warning: excluding shift (" << shift.facility_id << ", "
                  << iso_date(shift.shift_date) << ", " << shift.night_shift
                  << "): " << e.what() << '\n';
      }
    }
    if (joined.empty())
      throw JoinError("no shifts survived the covariate joins");

    {
      auto out = open_out(paths.joined);
      csv::write_row(out, {"facility_id", "shift_date", "night_shift",
                           "door_count", "dispenser_count", "compliance",
                           "air_temp_k", "rel_humidity_pct", "flu_severity"});
      for (const auto& j : joined)
        csv::write_row(out, {j.shift.facility_id, iso_date(j.shift.shift_date),
                             std::to_string(j.shift.night_shift),
                             std::to_string(j.shift.door_count),
                             std::to_string(j.shift.dispenser_count),
                             csv::format_double(j.shift.compliance),
                             csv::format_double(j.air_temp_k),
                             csv::format_double(j.rel_humidity_pct),
                             csv::format_double(j.flu_severity)});
    }

    std::vector<JoinedShift> model_rows = joined;
    AssembleMode mode = AssembleMode::global;
    if (!cfg.facility.empty()) {
      mode = AssembleMode::single_facility;
      std::erase_if(model_rows, [&](const JoinedShift& j) {
        return j.shift.facility_id != cfg.facility;
      });
      if (model_rows.empty())
        throw InputError("no joined shifts for facility '" + cfg.facility +
                         "'");
    }
    const DesignMatrix d = assemble(model_rows, mode);
    for (const auto& w : d.warnings) std::cerr << "warning: " << w << '\n';

    {
      auto out = open_out(paths.design);
      std::vector<std::string> header = d.feature_names;
      header.push_back("compliance");
      csv::write_row(out, header);
      std::vector<std::string> row(header.size());
      for (Eigen::Index i = 0; i < d.X.rows(); ++i) {
        for (Eigen::Index j = 0; j < d.X.cols(); ++j)
          row[static_cast<std::size_t>(j)] = csv::format_double(d.X(i, j));
        row.back() = csv::format_double(d.y(i));
        csv::write_row(out, row);
      }
    }
    {
      auto out = open_out(paths.design_scaling);
      csv::write_row(out, {"feature", "mean", "scale", "kind"});
      for (std::size_t j = 0; j < d.feature_names.size(); ++j)
        csv::write_row(out, {d.feature_names[j],
                             csv::format_double(d.column_means[j]),
                             csv::format_double(d.column_scales[j]),
                             d.kinds[j] == ColumnKind::continuous
                                 ? "continuous"
                                 : "binary"});
    }
    {
      const ReliefView v = assemble_relief(model_rows);
      auto out = open_out(paths.relief_design);
      std::vector<std::string> header = v.attribute_names;
      header.push_back("compliance");
      csv::write_row(out, header);
      std::vector<std::string> row(header.size());
      for (Eigen::Index i = 0; i < v.X.rows(); ++i) {
        for (Eigen::Index j = 0; j < v.X.cols(); ++j)
          row[static_cast<std::size_t>(j)] = csv::format_double(v.X(i, j));
        row.back() = csv::format_double(v.y(i));
        csv::write_row(out, row);
      }
    }
  });
}

void run_fit(const PipelineConfig& cfg) {
  with_stage("fit", [&] {
    const StagePaths paths = stage_paths(cfg.out);
    const DesignMatrix d = read_design(paths.design, paths.design_scaling);
    const FitReport report =
        cross_validate(d.X, d.y, d.feature_names, cfg.lambda, cfg.folds,
                       cfg.seed, cfg.threads);

    ordered_json j;
    j["intercept"] = report.hypothesis.intercept;
    j["lambda"] = report.hypothesis.lambda;
    ordered_json features = ordered_json::object();
    for (std::size_t i = 0; i < report.hypothesis.feature_names.size(); ++i)
      features[report.hypothesis.feature_names[i]] = {
          {"coefficient",
           report.hypothesis.coefficients(static_cast<Eigen::Index>(i))},
          {"p_value",
           report.hypothesis.p_values(static_cast<Eigen::Index>(i))}};
    j["features"] = features;
    j["metrics"] = {{"cv_correlation", report.cv_correlation},
                    {"cv_rmse", report.cv_rmse},
                    {"fold_count", report.fold_count}};
    ordered_json eliminated = ordered_json::array();
    for (const auto& e : report.eliminated)
      eliminated.push_back({{"feature", e.feature}, {"stage", e.stage}});
    j["eliminated"] = eliminated;
    auto out = open_out(paths.hypothesis);
    out << j.dump(2) << '\n';
  });
}

void run_rank(const PipelineConfig& cfg) {
  with_stage("rank", [&] {
    const StagePaths paths = stage_paths(cfg.out);
    const csv::Table t = csv::read_file(paths.relief_design);
    if (t.header.empty() || t.header.back() != "compliance")
      throw InputError(paths.relief_design +
                       ": last column must be 'compliance'");
    const std::size_t p = t.header.size() - 1;
    std::vector<std::string> names(t.header.begin(), t.header.end() - 1);
    static const std::set<std::string> kContinuous = {
        "air_temp", "rel_humidity", "flu_severity"};
    std::vector<bool> discrete;
    for (const auto& n : names) discrete.push_back(!kContinuous.count(n));

    Eigen::MatrixXd X(static_cast<Eigen::Index>(t.rows.size()),
                      static_cast<Eigen::Index>(p));
    Eigen::VectorXd y(static_cast<Eigen::Index>(t.rows.size()));
    for (std::size_t i = 0; i < t.rows.size(); ++i) {
      for (std::size_t j = 0; j < p; ++j)
        X(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
            csv::to_double(t, i, j);
      y(static_cast<Eigen::Index>(i)) = csv::to_double(t, i, p);
    }

    ReliefConfig rc;
    rc.neighbor_count = cfg.relief_neighbors;
    rc.sample_count = cfg.relief_samples;
    rc.sigma = cfg.relief_sigma;
    rc.seed = cfg.seed;
    const std::vector<Eigen::VectorXd> weights =
        relief_cv(X, y, discrete, rc, cfg.folds, cfg.seed, cfg.threads);
    const std::vector<RankedFeature> ranking = rank_features(weights, names);

    auto out = open_out(paths.ranking);
    csv::write_row(out, {"feature", "mean_weight", "mean_rank", "rank_sd"});
    for (const auto& r : ranking)
      csv::write_row(out, {r.feature, fmt("%.6f", r.mean_weight),
                           fmt("%.3f", r.mean_rank), fmt("%.3f", r.rank_sd)});
  });
}

void run_margins(const PipelineConfig& cfg) {
  with_stage("margins", [&] {
    const StagePaths paths = stage_paths(cfg.out);
    const DesignMatrix d = read_design(paths.design, paths.design_scaling);
    const Hypothesis h = read_hypothesis(paths.hypothesis);
    fs::create_directories(paths.margins_dir);
    for (const auto& feature : h.feature_names) {
      const MarginalCurve curve = marginal_effect(h, d, feature);
      const auto col = static_cast<std::size_t>(
          std::find(d.feature_names.begin(), d.feature_names.end(), feature) -
          d.feature_names.begin());
      const double mean = d.column_means[col];
      const double scale = d.column_scales[col];
      auto out = open_out(paths.margins_dir + "/" + feature + ".csv");
      csv::write_row(out, {"value", "predicted_rate", "density"});
      for (std::size_t i = 0; i < curve.values.size(); ++i) {
        const double raw = curve.values[i] * scale + mean;
        csv::write_row(
            out, {csv::format_double(raw),
                  csv::format_double(curve.predicted[i]),
                  curve.continuous
                      ? csv::format_double(curve.density[i] / scale)
                      : std::string()});
      }
    }
  });
}

void run_ttest(const PipelineConfig& cfg) {
  with_stage("ttest", [&] {
    const StagePaths paths = stage_paths(cfg.out);
    const std::vector<JoinedShift> joined = read_joined(paths.joined);
    const std::vector<FacilityMeta> metas = load_facilities(cfg.facilities);
    std::map<std::string, std::string> state_by_id;
    for (const auto& m : metas) state_by_id[m.facility_id] = m.state;

    std::map<std::string, std::vector<JoinedShift>> by_facility;
    for (const auto& j : joined) {
      if (!cfg.facility.empty() && j.shift.facility_id != cfg.facility)
        continue;
      by_facility[j.shift.facility_id].push_back(j);
    }
    if (by_facility.empty())
      throw InputError("no joined shifts to test" +
                       (cfg.facility.empty()
                            ? std::string()
                            : " for facility '" + cfg.facility + "'"));

    auto out = open_out(paths.ttest);
    csv::write_row(out, {"facility", "state", "feature", "mean_diff",
                         "p_value", "flagged"});
    for (const auto& [fid, rows] : by_facility) {
      for (const char* feature : {"temperature", "humidity"}) {
        try {
          const TTestResult r = decile_ttest(rows, feature);
          const bool flagged = r.mean_diff > 0.0 && r.p_value <= 0.05;
          csv::write_row(out, {fid, state_by_id.at(fid), feature,
                               fmt("%.6g", r.mean_diff),
                               fmt("%.6g", r.p_value), flagged ? "1" : "0"});
        } catch (const InputError& e) {
          std::cerr << "warning: skipping paired test for facility '" << fid
                    << "': " << e.what() << '\n';
        }
      }
    }
  });
}

void run_report(const PipelineConfig& cfg) {
  with_stage("report", [&] {
    const StagePaths paths = stage_paths(cfg.out);
    ordered_json j;
    // Deliberately no thread count here: the report must be identical for
    // any parallelism setting.
    j["config"] = {{"events", cfg.events},
                   {"facilities", cfg.facilities},
                   {"centroids", cfg.centroids},
                   {"weather", cfg.weather},
                   {"flu", cfg.flu},
                   {"lambda", cfg.lambda},
                   {"folds", cfg.folds},
                   {"seed", cfg.seed},
                   {"facility", cfg.facility},
                   {"relief_neighbors", cfg.relief_neighbors},
                   {"relief_samples", cfg.relief_samples},
                   {"relief_sigma", cfg.relief_sigma}};

    const csv::Table kept = csv::read_file(paths.shifts_kept);
    const csv::Table dropped = csv::read_file(paths.shifts_dropped);
    std::map<std::string, std::int64_t> reasons;
    const std::size_t c_reason = dropped.column("drop_reason");
    for (const auto& row : dropped.rows) ++reasons[row[c_reason]];
    ordered_json drop_hist = ordered_json::object();
    for (const char* r :
         {"low_door", "low_dispenser", "zero_compliance", "over_one"})
      drop_hist[r] = reasons.count(r) ? reasons[r] : 0;
    const csv::Table summary = csv::read_file(paths.facility_summary);
    ordered_json fac_rows = ordered_json::array();
    for (const auto& row : summary.rows) {
      ordered_json o = ordered_json::object();
      for (std::size_t c = 0; c < summary.header.size(); ++c)
        o[summary.header[c]] = row[c];
      fac_rows.push_back(o);
    }
    j["ingest"] = {{"kept", kept.rows.size()},
                   {"dropped", drop_hist},
                   {"facilities", fac_rows}};

    const csv::Table joined = csv::read_file(paths.joined);
    const csv::Table design = csv::read_file(paths.design);
    std::vector<std::string> columns(design.header.begin(),
                                     design.header.end() - 1);
    j["features"] = {
        {"rows", design.rows.size()},
        {"excluded_joins", kept.rows.size() - joined.rows.size()},
        {"columns", columns}};

    {
      std::ifstream in(paths.hypothesis);
      if (!in) throw InputError("cannot open " + paths.hypothesis);
      ordered_json fit;
      in >> fit;
      j["fit"] = fit;
    }

    const csv::Table ranking = csv::read_file(paths.ranking);
    ordered_json rank_rows = ordered_json::array();
    for (const auto& row : ranking.rows)
      rank_rows.push_back({{"feature", row[0]},
                           {"mean_weight", row[1]},
                           {"mean_rank", row[2]},
                           {"rank_sd", row[3]}});
    j["ranking"] = rank_rows;

    const csv::Table ttest = csv::read_file(paths.ttest);
    ordered_json ttest_rows = ordered_json::array();
    for (const auto& row : ttest.rows)
      ttest_rows.push_back({{"facility", row[0]},
                            {"state", row[1]},
                            {"feature", row[2]},
                            {"mean_diff", row[3]},
                            {"p_value", row[4]},
                            {"flagged", row[5]}});
    j["ttest"] = ttest_rows;

    ordered_json margin_features = ordered_json::array();
    {
      const Hypothesis h = read_hypothesis(paths.hypothesis);
      for (const auto& f : h.feature_names) margin_features.push_back(f);
    }
    j["margins"] = margin_features;

    auto out = open_out(paths.report);
    out << j.dump(2) << '\n';
  });
}

void run_all(const PipelineConfig& cfg) {
  run_ingest(cfg);
  run_features(cfg);
  run_fit(cfg);
  run_rank(cfg);
  run_margins(cfg);
  run_ttest(cfg);
  run_report(cfg);
}

}  // namespace hhc
