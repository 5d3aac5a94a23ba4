// Command-line front door: link-budget tables, stopping-distance queries,
// scenario simulation and parameter sweeps. All output is CSV or plain text;
// plotting is left to external tools.
//
// Exit codes: 0 success, 1 usage, 2 scenario error, 3 acceptance failure.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "rfbump/kinematics.hpp"
#include "rfbump/propagation.hpp"
#include "rfbump/scenario.hpp"
#include "rfbump/simengine.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitScenario = 2;
constexpr int kExitAcceptance = 3;

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.6g", v);
  return buf;
}

int write_output(const std::string& text, const std::string& path) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return kExitOk;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    std::cerr << "error: cannot open output file: " << path << "\n";
    return kExitUsage;
  }
  out << text;
  return kExitOk;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw rfbump::ScenarioError("cannot read scenario file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

struct RadioFlags {
  rfbump::RadioLinkParams params;

  void attach(CLI::App* cmd) {
    cmd->add_option("--tx-power", params.tx_power_dbm, "Transmit power (dBm)");
    cmd->add_option("--tx-gain", params.tx_gain_dbi, "Transmit antenna gain (dBi)");
    cmd->add_option("--tx-loss", params.tx_loss_db, "Transmitter loss (dB)");
    cmd->add_option("--misc-loss", params.misc_loss_db, "Miscellaneous loss (dB)");
    cmd->add_option("--rx-gain", params.rx_gain_dbi, "Receive antenna gain (dBi)");
    cmd->add_option("--rx-loss", params.rx_loss_db, "Receiver loss (dB)");
    cmd->add_option("--sensitivity", params.rx_sensitivity_dbm,
                    "Receiver sensitivity (dBm)");
    cmd->add_option("--frequency", params.frequency_hz, "Carrier frequency (Hz)");
  }
};

int cmd_linkbudget(double from_m, double to_m, double step_m,
                   const rfbump::RadioLinkParams& radio,
                   const std::string& out_path) {
  if (from_m <= 0.0 || to_m < from_m || step_m <= 0.0) {
    std::cerr << "error: require 0 < from <= to and step > 0\n";
    return kExitUsage;
  }
  try {
    radio.validate();
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  }
  std::string csv = "distance_m,fspl_db,p_rx_dbm,margin_db\n";
  for (double d = from_m; d <= to_m + 1e-9; d += step_m) {
    csv += fmt(d) + ',' + fmt(rfbump::fspl_db(d, radio.frequency_hz)) + ',' +
           fmt(rfbump::received_power_dbm(radio, d)) + ',' +
           fmt(rfbump::link_margin_db(radio, d)) + '\n';
  }
  return write_output(csv, out_path);
}

int cmd_stopdist(double speed_kmh, double mu, double g,
                 const std::string& out_path) {
  if (speed_kmh < 0.0) {
    std::cerr << "error: speed must be >= 0\n";
    return kExitUsage;
  }
  rfbump::FrictionModel friction{mu, g};
  try {
    friction.validate();
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  }
  const double u = rfbump::kmh_to_mps(speed_kmh);
  const double s_stop = rfbump::stopping_distance_m(u, friction);
  std::cerr << "stopping distance from " << fmt(speed_kmh) << " km/h: "
            << fmt(s_stop) << " m (~" << std::llround(s_stop / 10.0) * 10
            << " m)\n";
  std::string csv = "distance_m,speed_mps,speed_kmh\n";
  for (double s = 0.0; s < s_stop; s += 1.0) {
    const double v = rfbump::speed_at_distance_mps(u, friction, s);
    csv += fmt(s) + ',' + fmt(v) + ',' + fmt(rfbump::mps_to_kmh(v)) + '\n';
  }
  return write_output(csv, out_path);
}

std::string summary_line(const rfbump::RunSummary& sum) {
  if (!sum.triggered) return "no trigger\n";
  std::string line = "trigger_odometer_m=" + fmt(sum.trigger_odometer_m) +
                     " trigger_distance_to_rsu_m=" +
                     fmt(sum.trigger_distance_to_rsu_m);
  if (sum.bump_site_speed_mps)
    line += " bump_site_speed_mps=" + fmt(*sum.bump_site_speed_mps);
  if (sum.zone_exit_odometer_m)
    line += " zone_exit_odometer_m=" + fmt(*sum.zone_exit_odometer_m);
  return line + "\n";
}

int cmd_simulate(const std::string& scenario_path,
                 std::optional<std::uint64_t> seed,
                 const std::string& out_path) {
  rfbump::Scenario sc;
  try {
    sc = rfbump::load_scenario(read_file(scenario_path));
    if (seed) sc.shadowing.seed = *seed;
  } catch (const rfbump::ScenarioError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitScenario;
  }
  const auto result = rfbump::run(sc);
  const int rc = write_output(rfbump::write_trace_csv(result.trace), out_path);
  if (rc != kExitOk) return rc;
  std::cerr << summary_line(result.summary);
  const rfbump::RunSummary& sum = result.summary;
  const double allowed =
      rfbump::kmh_to_mps(sum.payload_used.bump_speed_kmh) + 0.1;
  if (!sum.triggered || !sum.bump_site_speed_mps ||
      *sum.bump_site_speed_mps > allowed)
    return kExitAcceptance;
  return kExitOk;
}

int cmd_sweep(const std::string& param, const std::vector<double>& values,
              const std::string& scenario_path, int seeds,
              const std::string& out_path) {
  if (values.empty() || seeds < 1) {
    std::cerr << "error: need at least one value and one seed\n";
    return kExitUsage;
  }
  std::string base_text;
  try {
    if (!scenario_path.empty()) base_text = read_file(scenario_path);
    rfbump::load_scenario(base_text);  // surface base-scenario errors early
  } catch (const rfbump::ScenarioError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitScenario;
  }

  auto sorted = values;
  std::sort(sorted.begin(), sorted.end());
  std::string csv =
      "value,bump_site_speed_mps,trigger_distance_mean_m,"
      "trigger_error_max_m,trigger_distance_std_m\n";
  for (double value : sorted) {
    rfbump::Scenario sc;
    try {
      sc = rfbump::load_scenario(base_text + "\n" + param + " = " + fmt(value) + "\n");
    } catch (const rfbump::ScenarioError& e) {
      const bool unknown =
          std::string(e.what()).find("unknown key") != std::string::npos;
      std::cerr << "error: " << e.what() << "\n";
      return unknown ? kExitUsage : kExitScenario;
    }
    const double analytic =
        rfbump::distance_from_rssi(sc.radio, sc.ivu.trigger_rssi_dbm);
    double worst_speed = 0.0, err_max = 0.0, sum_d = 0.0, sum_d2 = 0.0;
    int triggered = 0;
    const std::uint64_t base_seed = sc.shadowing.seed;
    for (int i = 0; i < seeds; ++i) {
      sc.shadowing.seed = base_seed + static_cast<std::uint64_t>(i);
      const auto result = rfbump::run(sc);
      const rfbump::RunSummary& sum = result.summary;
      if (!sum.triggered) continue;
      ++triggered;
      const double d = sum.trigger_distance_to_rsu_m;
      sum_d += d;
      sum_d2 += d * d;
      err_max = std::max(err_max, std::fabs(d - analytic));
      if (sum.bump_site_speed_mps)
        worst_speed = std::max(worst_speed, *sum.bump_site_speed_mps);
    }
    if (triggered == 0) {
      csv += fmt(value) + ",,,,\n";
      continue;
    }
    const double mean = sum_d / triggered;
    const double var = std::max(0.0, sum_d2 / triggered - mean * mean);
    csv += fmt(value) + ',' + fmt(worst_speed) + ',' + fmt(mean) + ',' +
           fmt(err_max) + ',' + fmt(std::sqrt(var)) + '\n';
  }
  return write_output(csv, out_path);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"RF speed-bump link-budget and deceleration simulator"};
  app.require_subcommand(1);

  // linkbudget
  auto* lb = app.add_subcommand("linkbudget",
                                "CSV of FSPL, received power and link margin "
                                "over a distance range");
  double lb_from = 1.0, lb_to = 400.0, lb_step = 1.0;
  RadioFlags lb_radio;
  std::string lb_out;
  lb->add_option("--from", lb_from, "Start distance (m)");
  lb->add_option("--to", lb_to, "End distance (m), inclusive");
  lb->add_option("--step", lb_step, "Distance step (m)");
  lb_radio.attach(lb);
  lb->add_option("-o,--output", lb_out, "Output file (default: stdout)");

  // stopdist
  auto* sd = app.add_subcommand("stopdist",
                                "Stopping distance and braking profile for a "
                                "given approach speed");
  double sd_speed = 120.0, sd_mu = 0.7, sd_g = 10.0;
  std::string sd_out;
  sd->add_option("--speed", sd_speed, "Approach speed (km/h)");
  sd->add_option("--mu", sd_mu, "Coefficient of friction");
  sd->add_option("--g", sd_g, "Deceleration rate (m/s^2)");
  sd->add_option("-o,--output", sd_out, "Output file (default: stdout)");

  // simulate
  auto* sim = app.add_subcommand("simulate",
                                 "Run a scenario and emit the full trace CSV");
  std::string sim_scenario, sim_out;
  std::optional<std::uint64_t> sim_seed;
  sim->add_option("scenario", sim_scenario, "Scenario file")->required();
  sim->add_option("--seed", sim_seed, "Override the shadowing seed");
  sim->add_option("-o,--output", sim_out, "Trace output file (default: stdout)");

  // sweep
  auto* sw = app.add_subcommand("sweep",
                                "Sweep one scenario key over a value list");
  std::string sw_param, sw_scenario, sw_out;
  std::vector<double> sw_values;
  int sw_seeds = 1;
  sw->add_option("--param", sw_param, "Scenario key to sweep")->required();
  sw->add_option("--values", sw_values, "Values to sweep over")
      ->required()
      ->delimiter(',');
  sw->add_option("--seeds", sw_seeds, "Seeds per value (consecutive from the scenario seed)");
  sw->add_option("scenario", sw_scenario, "Base scenario file (default: canonical)");
  sw->add_option("-o,--output", sw_out, "Output file (default: stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kExitOk : kExitUsage;
  }

  if (lb->parsed())
    return cmd_linkbudget(lb_from, lb_to, lb_step, lb_radio.params, lb_out);
  if (sd->parsed()) return cmd_stopdist(sd_speed, sd_mu, sd_g, sd_out);
  if (sim->parsed()) return cmd_simulate(sim_scenario, sim_seed, sim_out);
  if (sw->parsed())
    return cmd_sweep(sw_param, sw_values, sw_scenario, sw_seeds, sw_out);
  return kExitUsage;
}
