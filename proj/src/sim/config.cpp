#include "ts/sim/config.hpp"

#include <stdexcept>

#include "json.hpp"

namespace ts::sim {

using nlohmann::json;

const char* band_name(Band b) { return b == Band::kLow850 ? "low850" : "cband3500"; }

Band band_from_name(const std::string& name) {
  if (name == "low850") return Band::kLow850;
  if (name == "cband3500") return Band::kCBand3500;
  throw std::invalid_argument("unknown band: " + name + " (expected low850|cband3500)");
}

void SimConfig::validate() const {
  auto fail = [](const std::string& msg) { throw std::invalid_argument("config: " + msg); };
  if (carrier_freq_hz <= 0) fail("carrier_freq_hz must be > 0");
  if (isd_m <= 0) fail("isd_m must be > 0");
  if (nr_bandwidth_hz <= 0 || lte_bandwidth_hz <= 0) fail("bandwidths must be > 0");
  if (n_nr_cells != 7) fail("n_nr_cells must be 7 (central cell plus hexagonal ring)");
  if (n_lte_cells != 1) fail("n_lte_cells must be 1");
  if (n_ues < 1) fail("n_ues must be >= 1");
  if (speed_min_mps < 0 || speed_min_mps > speed_max_mps)
    fail("need 0 <= speed_min_mps <= speed_max_mps");
  if (sim_step_ms == 0 || report_period_ms == 0) fail("step and report period must be > 0");
  if (report_period_ms % sim_step_ms != 0) fail("sim_step_ms must divide report_period_ms");
  if (sim_duration_ms % report_period_ms != 0)
    fail("sim_duration_ms must be a multiple of report_period_ms");
  if (shadowing_sigma_db < 0) fail("shadowing_sigma_db must be >= 0");
  if (!(mcs_qpsk_db < mcs_16qam_db && mcs_16qam_db < mcs_64qam_db))
    fail("MCS thresholds must be strictly increasing");
  if (report_drop_prob < 0 || report_drop_prob > 1) fail("report_drop_prob must be in [0,1]");
}

std::string SimConfig::to_json() const {
  json j;
  j["band"] = band_name(band);
  j["carrier_freq_hz"] = carrier_freq_hz;
  j["isd_m"] = isd_m;
  j["nr_bandwidth_hz"] = nr_bandwidth_hz;
  j["lte_bandwidth_hz"] = lte_bandwidth_hz;
  j["n_nr_cells"] = n_nr_cells;
  j["n_lte_cells"] = n_lte_cells;
  j["n_ues"] = n_ues;
  j["speed_min_mps"] = speed_min_mps;
  j["speed_max_mps"] = speed_max_mps;
  j["report_period_ms"] = report_period_ms;
  j["sim_step_ms"] = sim_step_ms;
  j["sim_duration_ms"] = sim_duration_ms;
  j["ho_interruption_ms"] = ho_interruption_ms;
  j["seed"] = seed;
  j["base_unix_ms"] = base_unix_ms;
  j["nr_tx_power_dbm"] = nr_tx_power_dbm;
  j["lte_tx_power_dbm"] = lte_tx_power_dbm;
  j["shadowing_sigma_db"] = shadowing_sigma_db;
  j["noise_figure_db"] = noise_figure_db;
  j["mcs_qpsk_db"] = mcs_qpsk_db;
  j["mcs_16qam_db"] = mcs_16qam_db;
  j["mcs_64qam_db"] = mcs_64qam_db;
  j["direction_hold_ms"] = direction_hold_ms;
  j["bounds_margin_m"] = bounds_margin_m;
  j["report_drop_prob"] = report_drop_prob;
  if (!nr_tx_power_overrides.empty()) {
    json o = json::object();
    for (const auto& [cell, dbm] : nr_tx_power_overrides) o[std::to_string(cell)] = dbm;
    j["nr_tx_power_overrides"] = o;
  }
  return j.dump(2);
}

SimConfig SimConfig::from_json(const std::string& json_text) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw std::invalid_argument(std::string("config: invalid JSON: ") + e.what());
  }
  // Band preset first so explicit fields can override it.
  SimConfig c;
  if (j.contains("band")) {
    Band b = band_from_name(j["band"].get<std::string>());
    c = (b == Band::kCBand3500) ? cband3500() : low850();
  }
  auto get = [&j](const char* key, auto& field) {
    if (j.contains(key)) field = j[key].get<std::decay_t<decltype(field)>>();
  };
  get("carrier_freq_hz", c.carrier_freq_hz);
  get("isd_m", c.isd_m);
  get("nr_bandwidth_hz", c.nr_bandwidth_hz);
  get("lte_bandwidth_hz", c.lte_bandwidth_hz);
  get("n_nr_cells", c.n_nr_cells);
  get("n_lte_cells", c.n_lte_cells);
  get("n_ues", c.n_ues);
  get("speed_min_mps", c.speed_min_mps);
  get("speed_max_mps", c.speed_max_mps);
  get("report_period_ms", c.report_period_ms);
  get("sim_step_ms", c.sim_step_ms);
  get("sim_duration_ms", c.sim_duration_ms);
  get("ho_interruption_ms", c.ho_interruption_ms);
  get("seed", c.seed);
  get("base_unix_ms", c.base_unix_ms);
  get("nr_tx_power_dbm", c.nr_tx_power_dbm);
  get("lte_tx_power_dbm", c.lte_tx_power_dbm);
  get("shadowing_sigma_db", c.shadowing_sigma_db);
  get("noise_figure_db", c.noise_figure_db);
  get("mcs_qpsk_db", c.mcs_qpsk_db);
  get("mcs_16qam_db", c.mcs_16qam_db);
  get("mcs_64qam_db", c.mcs_64qam_db);
  get("direction_hold_ms", c.direction_hold_ms);
  get("bounds_margin_m", c.bounds_margin_m);
  get("report_drop_prob", c.report_drop_prob);
  if (j.contains("nr_tx_power_overrides")) {
    for (auto& [key, val] : j["nr_tx_power_overrides"].items())
      c.nr_tx_power_overrides[static_cast<uint32_t>(std::stoul(key))] = val.get<double>();
  }
  return c;
}

SimConfig SimConfig::low850() { return SimConfig{}; }

SimConfig SimConfig::cband3500() {
  SimConfig c;
  c.band = Band::kCBand3500;
  c.carrier_freq_hz = 3.5e9;
  c.isd_m = 1000.0;
  return c;
}

}  // namespace ts::sim
