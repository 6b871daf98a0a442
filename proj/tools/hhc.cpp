#include <filesystem>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "hhc/errors.hpp"
#include "hhc/pipeline.hpp"
#include "hhc/synth.hpp"

namespace {

void add_pipeline_options(CLI::App* cmd, hhc::PipelineConfig& cfg) {
  cmd->set_config("--config", "", "Flat key=value config file; command-line "
                                  "flags override matching keys");
  cmd->add_option("--events", cfg.events, "Raw sensor event CSV");
  cmd->add_option("--facilities", cfg.facilities, "Facility catalog CSV");
  cmd->add_option("--centroids", cfg.centroids, "Zipcode centroid CSV");
  cmd->add_option("--weather", cfg.weather, "Gridded weather CSV");
  cmd->add_option("--flu", cfg.flu, "Weekly city flu mortality CSV");
  cmd->add_option("--lambda", cfg.lambda, "Ridge penalty")
      ->capture_default_str();
  cmd->add_option("--folds", cfg.folds, "Cross-validation folds")
      ->capture_default_str();
  cmd->add_option("--seed", cfg.seed, "Random seed")->capture_default_str();
  cmd->add_option("--facility", cfg.facility,
                  "Fit a single facility (omits facility indicators)");
  cmd->add_option("--out", cfg.out, "Artifact output directory")
      ->capture_default_str();
  cmd->add_option("--threads", cfg.threads,
                  "Worker threads for fold-level parallelism")
      ->capture_default_str();
  cmd->add_option("--relief-k", cfg.relief_neighbors,
                  "Neighbors per seed instance for feature ranking")
      ->capture_default_str();
  cmd->add_option("--relief-m", cfg.relief_samples,
                  "Seed instances for feature ranking (-1 = all)")
      ->capture_default_str();
  cmd->add_option("--relief-sigma", cfg.relief_sigma,
                  "Rank-decay scale for neighbor influence")
      ->capture_default_str();
}

void require_inputs(CLI::App* cmd, std::initializer_list<const char*> names) {
  for (const char* n : names) cmd->get_option(n)->required();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Sensor-driven hand-hygiene compliance analysis pipeline"};
  app.require_subcommand(1);

  hhc::PipelineConfig cfg;
  hhc::SynthSpec spec;
  std::string synth_out = "synth";
  std::string synth_start = "2014-01-06";

  CLI::App* synth =
      app.add_subcommand("synth", "Generate a synthetic corpus with planted "
                                  "effects and a ground-truth document");
  synth->set_config("--config");
  synth->add_option("--out", synth_out, "Output directory")
      ->capture_default_str();
  synth->add_option("--seed", spec.seed, "Random seed")->capture_default_str();
  synth->add_option("--facility-count", spec.facility_count, "Facilities")
      ->capture_default_str();
  synth->add_option("--days", spec.days, "Calendar days per facility")
      ->capture_default_str();
  synth->add_option("--record-limit", spec.record_limit,
                    "Stop after this many shift records (-1 = all)")
      ->capture_default_str();
  synth->add_option("--start", synth_start, "First shift date (YYYY-MM-DD)")
      ->capture_default_str();
  synth->add_option("--base", spec.base_compliance, "Baseline compliance")
      ->capture_default_str();
  synth->add_option("--noise-sd", spec.noise_sd, "Target noise sd")
      ->capture_default_str();
  synth->add_option("--coef-air-temp", spec.coef_air_temp,
                    "Planted effect per temperature sd")
      ->capture_default_str();
  synth->add_option("--coef-rel-humidity", spec.coef_rel_humidity,
                    "Planted effect per humidity sd")
      ->capture_default_str();
  synth->add_option("--coef-flu-severity", spec.coef_flu_severity,
                    "Planted effect per severity sd")
      ->capture_default_str();
  synth->add_option("--coef-night-shift", spec.coef_night_shift,
                    "Planted night-shift effect")
      ->capture_default_str();
  synth->add_option("--coef-weekday", spec.coef_weekday,
                    "Planted weekday effect")
      ->capture_default_str();
  synth->add_option("--coef-july-effect", spec.coef_july_effect,
                    "Planted July 1-7 effect")
      ->capture_default_str();
  synth->add_option("--facility-effects", spec.facility_effects,
                    "Per-facility compliance offsets");
  synth->add_option("--door-min", spec.door_min, "Minimum door count")
      ->capture_default_str();
  synth->add_option("--door-max", spec.door_max, "Maximum door count")
      ->capture_default_str();
  synth->add_option("--violations-low-door", spec.violations_low_door,
                    "Records planted with door_count < 10")
      ->capture_default_str();
  synth->add_option("--violations-low-dispenser", spec.violations_low_dispenser,
                    "Records planted with dispenser_count < 10")
      ->capture_default_str();
  synth->add_option("--violations-over-one", spec.violations_over_one,
                    "Records planted with compliance > 1")
      ->capture_default_str();
  synth->add_option("--weather-gaps", spec.weather_gap_count,
                    "Weather observations to omit for join-failure testing")
      ->capture_default_str();

  CLI::App* ingest = app.add_subcommand(
      "ingest", "Aggregate raw events into filtered shift records");
  add_pipeline_options(ingest, cfg);
  require_inputs(ingest, {"--events", "--facilities"});

  CLI::App* features = app.add_subcommand(
      "features", "Join covariates and build the design matrices");
  add_pipeline_options(features, cfg);
  require_inputs(features,
                 {"--facilities", "--centroids", "--weather", "--flu"});

  CLI::App* fit = app.add_subcommand(
      "fit", "Cross-validated ridge fit with feature selection");
  add_pipeline_options(fit, cfg);

  CLI::App* rank =
      app.add_subcommand("rank", "Instance-based feature ranking");
  add_pipeline_options(rank, cfg);

  CLI::App* margins = app.add_subcommand(
      "margins", "Marginal-effect curves with density overlays");
  add_pipeline_options(margins, cfg);

  CLI::App* ttest = app.add_subcommand(
      "ttest", "Per-facility decile weather comparisons");
  add_pipeline_options(ttest, cfg);
  require_inputs(ttest, {"--facilities"});

  CLI::App* report =
      app.add_subcommand("report", "Aggregate artifacts into one document");
  add_pipeline_options(report, cfg);

  CLI::App* run = app.add_subcommand("run", "Full pipeline end to end");
  add_pipeline_options(run, cfg);
  require_inputs(run, {"--events", "--facilities", "--centroids", "--weather",
                       "--flu"});

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : hhc::exit_code::config;
  }

  try {
    if (synth->parsed()) {
      spec.start_date = hhc::parse_date(synth_start, "--start");
      std::filesystem::create_directories(synth_out);
      hhc::generate(spec, hhc::synth_paths(synth_out));
    } else if (ingest->parsed()) {
      hhc::run_ingest(cfg);
    } else if (features->parsed()) {
      hhc::run_features(cfg);
    } else if (fit->parsed()) {
      hhc::run_fit(cfg);
    } else if (rank->parsed()) {
      hhc::run_rank(cfg);
    } else if (margins->parsed()) {
      hhc::run_margins(cfg);
    } else if (ttest->parsed()) {
      hhc::run_ttest(cfg);
    } else if (report->parsed()) {
      hhc::run_report(cfg);
    } else if (run->parsed()) {
      hhc::run_all(cfg);
    }
  } catch (const hhc::InputError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return hhc::exit_code::input;
  } catch (const hhc::JoinError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return hhc::exit_code::join;
  } catch (const hhc::InferenceError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return hhc::exit_code::inference;
  } catch (const hhc::ConfigError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return hhc::exit_code::config;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return hhc::exit_code::failure;
  }
  return hhc::exit_code::ok;
}
