#include "ts/eval/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>
#include <stdexcept>

#include "ts/util/log.hpp"
#include "ts/util/text.hpp"

namespace ts::eval {

double percentile_nearest_rank(std::vector<double> samples, double p) {
  if (samples.empty()) throw std::invalid_argument("percentile: empty sample set");
  if (p < 0.0 || p > 100.0) throw std::invalid_argument("percentile: p outside [0,100]");
  std::sort(samples.begin(), samples.end());
  size_t rank = static_cast<size_t>(std::ceil(p / 100.0 * static_cast<double>(samples.size())));
  if (rank == 0) rank = 1;
  return samples[rank - 1];
}

double spectral_efficiency(double bits_served, double bandwidth_hz, double duration_s) {
  if (bandwidth_hz <= 0.0 || duration_s <= 0.0)
    throw std::invalid_argument("spectral_efficiency: bandwidth and duration must be > 0");
  return bits_served / (bandwidth_hz * duration_s);
}

double mobility_overhead(uint32_t ho_count, double duration_s, double mean_thpt_u,
                         const std::vector<double>& mean_thpt_all) {
  if (duration_s <= 0.0) throw std::invalid_argument("mobility_overhead: duration must be > 0");
  double total = 0.0;
  for (double t : mean_thpt_all) total += t;
  if (total <= 0.0) {
    TS_LOG_WARN("mobility_overhead: zero total throughput, H_u defined as 0");
    return 0.0;
  }
  return (static_cast<double>(ho_count) / duration_s) * (mean_thpt_u / total);
}

RunMetrics compute_run_metrics(const std::vector<UeWindowRow>& ue_rows,
                               const std::vector<CellWindowRow>& cell_rows,
                               const std::vector<sim::EventRow>& events,
                               const sim::SimConfig& config) {
  RunMetrics m;
  m.duration_s = static_cast<double>(config.sim_duration_ms) / 1000.0;

  struct UeAcc {
    uint64_t bits = 0;
    double sinr_sum = 0.0;
    uint64_t windows = 0;
  };
  std::map<uint32_t, UeAcc> per_ue;
  for (const auto& row : ue_rows) {
    auto& acc = per_ue[row.ue_id];
    acc.bits += row.bits_nr + row.bits_lte;
    acc.sinr_sum += row.sinr_db;
    acc.windows += 1;
    m.sinr_samples_db.push_back(row.sinr_db);
    m.total_ue_bits += row.bits_nr + row.bits_lte;
  }

  std::map<uint32_t, uint32_t> ho_counts;
  for (const auto& ev : events)
    if (ev.kind == "ho_exec") ho_counts[ev.ue_id] += 1;

  std::vector<double> mean_thpts;
  for (const auto& [ue_id, acc] : per_ue)
    mean_thpts.push_back(static_cast<double>(acc.bits) / m.duration_s);

  size_t i = 0;
  for (const auto& [ue_id, acc] : per_ue) {
    UeMetrics um;
    um.ue_id = ue_id;
    um.mean_throughput_bps = mean_thpts[i++];
    um.ho_count = ho_counts.count(ue_id) ? ho_counts.at(ue_id) : 0;
    um.h_u = mobility_overhead(um.ho_count, m.duration_s, um.mean_throughput_bps, mean_thpts);
    um.mean_sinr_db = acc.windows ? acc.sinr_sum / static_cast<double>(acc.windows) : 0.0;
    m.per_ue.push_back(um);
    m.total_handovers += um.ho_count;
    m.mean_ue_spectral_eff +=
        spectral_efficiency(static_cast<double>(acc.bits), config.nr_bandwidth_hz, m.duration_s);
  }
  if (!m.per_ue.empty()) m.mean_ue_spectral_eff /= static_cast<double>(m.per_ue.size());

  if (!mean_thpts.empty()) {
    double sum = 0.0;
    for (double t : mean_thpts) sum += t;
    m.mean_throughput_bps = sum / static_cast<double>(mean_thpts.size());
    m.p10_throughput_bps = percentile_nearest_rank(mean_thpts, 10.0);
    m.p95_throughput_bps = percentile_nearest_rank(mean_thpts, 95.0);
  }

  struct CellAcc {
    uint64_t bits = 0;
    double prb_sum = 0.0;
    uint64_t windows = 0;
    bool is_nr = false;
    double bandwidth_hz = 0.0;
  };
  std::map<uint32_t, CellAcc> per_cell;
  uint32_t lte_cell_id = static_cast<uint32_t>(config.n_nr_cells);
  for (const auto& row : cell_rows) {
    auto& acc = per_cell[row.cell_id];
    acc.bits += row.bits;
    acc.prb_sum += row.prb_util_pct;
    acc.windows += 1;
    acc.is_nr = row.cell_id < lte_cell_id;
    acc.bandwidth_hz = acc.is_nr ? config.nr_bandwidth_hz : config.lte_bandwidth_hz;
    m.total_cell_bits += row.bits;
  }
  uint32_t nr_cells = 0;
  for (const auto& [cell_id, acc] : per_cell) {
    m.mean_cell_spectral_eff +=
        spectral_efficiency(static_cast<double>(acc.bits), acc.bandwidth_hz, m.duration_s);
    if (acc.is_nr && acc.windows > 0) {
      m.mean_prb_util_pct += acc.prb_sum / static_cast<double>(acc.windows);
      nr_cells += 1;
    }
  }
  if (!per_cell.empty()) m.mean_cell_spectral_eff /= static_cast<double>(per_cell.size());
  if (nr_cells > 0) m.mean_prb_util_pct /= static_cast<double>(nr_cells);
  return m;
}

std::string metrics_csv_header() {
  return "policy,seed,n_ues,duration_s,mean_throughput_bps,p10_throughput_bps,"
         "p95_throughput_bps,mean_ue_spectral_eff,mean_cell_spectral_eff,mean_prb_util_pct,"
         "total_handovers,mean_h_u";
}

std::string metrics_csv_row(const std::string& policy, uint64_t seed, const RunMetrics& m) {
  using util::fmt_double;
  double mean_hu = 0.0;
  for (const auto& u : m.per_ue) mean_hu += u.h_u;
  if (!m.per_ue.empty()) mean_hu /= static_cast<double>(m.per_ue.size());
  std::ostringstream os;
  os << policy << ',' << seed << ',' << m.per_ue.size() << ',' << fmt_double(m.duration_s) << ','
     << fmt_double(m.mean_throughput_bps) << ',' << fmt_double(m.p10_throughput_bps) << ','
     << fmt_double(m.p95_throughput_bps) << ',' << fmt_double(m.mean_ue_spectral_eff) << ','
     << fmt_double(m.mean_cell_spectral_eff) << ',' << fmt_double(m.mean_prb_util_pct) << ','
     << m.total_handovers << ',' << fmt_double(mean_hu);
  return os.str();
}

void write_per_ue_csv(const std::string& path, const RunMetrics& m) {
  std::ostringstream os;
  os << "ue_id,mean_throughput_bps,ho_count,h_u,mean_sinr_db\n";
  for (const auto& u : m.per_ue)
    os << u.ue_id << ',' << util::fmt_double(u.mean_throughput_bps) << ',' << u.ho_count << ','
       << util::fmt_double(u.h_u) << ',' << util::fmt_double(u.mean_sinr_db) << '\n';
  util::write_file(path, os.str());
}

void write_sinr_cdf_csv(const std::string& path, const RunMetrics& m) {
  std::vector<double> samples = m.sinr_samples_db;
  std::sort(samples.begin(), samples.end());
  std::ostringstream os;
  os << "sinr_db,cdf\n";
  size_t n = samples.size();
  for (size_t i = 0; i < n; ++i) {
    os << util::fmt_double(samples[i]) << ','
       << util::fmt_double(static_cast<double>(i + 1) / static_cast<double>(n)) << '\n';
  }
  util::write_file(path, os.str());
}

void write_ue_windows_csv(const std::string& path, const std::vector<UeWindowRow>& rows) {
  std::ostringstream os;
  os << "window_end_ms,ue_id,serving_cell,bits_nr,bits_lte,sinr_db\n";
  for (const auto& r : rows)
    os << r.window_end_ms << ',' << r.ue_id << ',' << r.serving_cell << ',' << r.bits_nr << ','
       << r.bits_lte << ',' << util::fmt_double(r.sinr_db) << '\n';
  util::write_file(path, os.str());
}

void write_cell_windows_csv(const std::string& path, const std::vector<CellWindowRow>& rows) {
  std::ostringstream os;
  os << "window_end_ms,cell_id,prb_util_pct,bits,active_ues,tb_count\n";
  for (const auto& r : rows)
    os << r.window_end_ms << ',' << r.cell_id << ',' << util::fmt_double(r.prb_util_pct) << ','
       << r.bits << ',' << r.active_ues << ',' << r.tb_count << '\n';
  util::write_file(path, os.str());
}

std::vector<UeWindowRow> read_ue_windows_csv(const std::string& path) {
  std::istringstream in(util::read_file(path));
  std::string line;
  std::getline(in, line);  // header
  std::vector<UeWindowRow> rows;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    auto f = util::split(line, ',');
    if (f.size() != 6) throw std::runtime_error("bad ues.csv row: " + line);
    UeWindowRow r;
    r.window_end_ms = std::stoull(f[0]);
    r.ue_id = static_cast<uint32_t>(std::stoul(f[1]));
    r.serving_cell = static_cast<uint32_t>(std::stoul(f[2]));
    r.bits_nr = std::stoull(f[3]);
    r.bits_lte = std::stoull(f[4]);
    r.sinr_db = std::stod(f[5]);
    rows.push_back(r);
  }
  return rows;
}

std::vector<CellWindowRow> read_cell_windows_csv(const std::string& path) {
  std::istringstream in(util::read_file(path));
  std::string line;
  std::getline(in, line);
  std::vector<CellWindowRow> rows;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    auto f = util::split(line, ',');
    if (f.size() != 6) throw std::runtime_error("bad cells.csv row: " + line);
    CellWindowRow r;
    r.window_end_ms = std::stoull(f[0]);
    r.cell_id = static_cast<uint32_t>(std::stoul(f[1]));
    r.prb_util_pct = std::stod(f[2]);
    r.bits = std::stoull(f[3]);
    r.active_ues = static_cast<uint32_t>(std::stoul(f[4]));
    r.tb_count = static_cast<uint32_t>(std::stoul(f[5]));
    rows.push_back(r);
  }
  return rows;
}

}  // namespace ts::eval
