#include "informality/cli.hpp"

#include <CLI11.hpp>
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <ctime>
#include <filesystem>
#include <fmt/format.h>
#include <fstream>
#include <numeric>
#include <optional>
#include <random>

#include "informality/csv.hpp"
#include "informality/decompose.hpp"
#include "informality/ingest.hpp"
#include "informality/output.hpp"
#include "informality/published_table.hpp"
#include "informality/tabulate.hpp"
#include "informality/taxonomy.hpp"

#ifndef INFORMALITY_VERSION
#define INFORMALITY_VERSION "0.0.0"
#endif
#ifndef INFORMALITY_DEFAULT_DATA_DIR
#define INFORMALITY_DEFAULT_DATA_DIR "data"
#endif

namespace informality::cli {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct RunConfig {
  std::string command;
  std::string input;
  std::string layout;
  std::vector<std::string> recodes;
  std::string policy;
  double alpha = kDefaultAlpha;
  std::string category;
  std::string secondary;
  std::string outer_key = "employment_class";
  std::string inner_key = "occupation";
  std::string format = "csv";
  std::uint64_t seed = 68;
  std::size_t count = 1000;
  std::string indeterminate = "exclude";
  int min_age = -1;
  double trim_top = 0.0;
  std::string output_dir;
  bool classified = false;
  unsigned threads = 1;
};

std::string env_or(const char* name, const std::string& fallback) {
  const char* v = std::getenv(name);
  return v && *v ? std::string(v) : fallback;
}

fs::path data_dir() { return env_or("INFORMALITY_DATA_DIR", INFORMALITY_DEFAULT_DATA_DIR); }

std::string utc_timestamp() {
  const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

json input_entry(const fs::path& p) {
  std::error_code ec;
  const auto size = fs::file_size(p, ec);
  return json{{"path", p.string()}, {"bytes", ec ? json(nullptr) : json(size)}};
}

Category category_arg(const std::string& name, const char* flag) {
  auto c = parse_category(name);
  if (!c) throw ConfigError(fmt::format("{}: unknown category '{}'", flag, name));
  return *c;
}

std::vector<std::string> declared_labels(Category c) {
  switch (c) {
    case Category::EmploymentClass:
      return {"Formal", "Informal"};
    case Category::Sector:
      return {kSectorLabels.begin(), kSectorLabels.end()};
    case Category::Gender:
      return {kGenderLabels.begin(), kGenderLabels.end()};
    case Category::SocialGroup:
      return {kSocialGroupLabels.begin(), kSocialGroupLabels.end()};
    default:
      return {};
  }
}

// Writes one artifact and records it in the manifest.
class Artifacts {
 public:
  Artifacts(const RunConfig& cfg, std::ostream& out) : cfg_(cfg), out_(out) {
    dir_ = cfg.output_dir.empty() ? fs::path(env_or("INFORMALITY_OUTPUT_DIR", ".")) : fs::path(cfg.output_dir);
    std::error_code ec;
    fs::create_directories(dir_, ec);
    if (ec) throw ConfigError("cannot create output directory " + dir_.string() + ": " + ec.message());
  }

  template <typename Writer>
  void write(const std::string& name, Writer&& writer) {
    const fs::path p = dir_ / name;
    std::ofstream f(p, std::ios::binary);
    if (!f) throw IoError("cannot write " + p.string());
    writer(f);
    f.flush();
    if (!f) throw IoError("write failed for " + p.string());
    written_.push_back(p.string());
    out_ << "wrote " << p.string() << '\n';
  }

  void manifest(const std::string& stem, json m) {
    m["tool"] = "informality";
    m["version"] = INFORMALITY_VERSION;
    m["command"] = cfg_.command;
    m["created_utc"] = utc_timestamp();
    m["outputs"] = written_;
    write(stem + ".manifest.json", [&](std::ostream& o) { o << m.dump(2) << '\n'; });
  }

  const std::string& ext() const {
    static const std::string csv = "csv", js = "json";
    return cfg_.format == "json" ? js : csv;
  }

 private:
  const RunConfig& cfg_;
  std::ostream& out_;
  fs::path dir_;
  std::vector<std::string> written_;
};

RecodeSet load_recodes(const std::vector<std::string>& paths) {
  std::vector<RecodeMap> maps;
  for (const auto& p : paths) {
    if (fs::is_directory(p)) {
      std::vector<fs::path> files;
      for (const auto& e : fs::directory_iterator(p))
        if (e.path().extension() == ".csv") files.push_back(e.path());
      std::sort(files.begin(), files.end());
      for (const auto& f : files) maps.push_back(RecodeMap::load(f));
    } else if (fs::exists(p)) {
      maps.push_back(RecodeMap::load(p));
    } else {
      throw ConfigError("recode path does not exist: " + p);
    }
  }
  return make_recode_set(std::move(maps));
}

std::string resolve_layout(const RunConfig& cfg) {
  if (!cfg.layout.empty()) return cfg.layout;
  const std::string env = env_or("INFORMALITY_LAYOUT", "");
  if (!env.empty()) return env;
  const bool csv = fs::path(cfg.input).extension() == ".csv";
  return (data_dir() / "layouts" / (csv ? "extract_csv.layout" : "extract_fixed.layout")).string();
}

std::vector<std::string> resolve_recodes(const RunConfig& cfg) {
  if (!cfg.recodes.empty()) return cfg.recodes;
  return {env_or("INFORMALITY_RECODES", (data_dir() / "recodes").string())};
}

void require_input(const RunConfig& cfg) {
  if (cfg.input.empty()) throw ConfigError("--input is required");
  if (!fs::exists(cfg.input)) throw ConfigError("input file does not exist: " + cfg.input);
}

IndeterminatePolicy indeterminate_policy(const RunConfig& cfg) {
  return cfg.indeterminate == "informal" ? IndeterminatePolicy::Informal : IndeterminatePolicy::Exclude;
}

struct Ingested {
  std::vector<ReadResult> results;
  IngestReport report;
};

Ingested ingest_input(const RunConfig& cfg, json& manifest) {
  require_input(cfg);
  const std::string layout_path = resolve_layout(cfg);
  const auto layout = load_layout(layout_path);
  const auto recode_paths = resolve_recodes(cfg);
  const auto recodes = load_recodes(recode_paths);
  std::ifstream in(cfg.input, std::ios::binary);
  if (!in) throw IoError("cannot open input " + cfg.input);
  Ingested g;
  g.results = read_records(in, layout, recodes);
  g.report = ingest_summary(g.results);
  manifest["inputs"] = json::array({input_entry(cfg.input), input_entry(layout_path)});
  for (const auto& r : recode_paths) manifest["inputs"].push_back(input_entry(r));
  manifest["ingest"] = to_json(g.report);
  return g;
}

ClassificationPolicy load_policy(const RunConfig& cfg, json& manifest) {
  const std::string path = cfg.policy.empty() ? env_or("INFORMALITY_POLICY", "") : cfg.policy;
  if (path.empty()) return ClassificationPolicy();
  auto p = ClassificationPolicy::load(path);
  manifest["policy"] = {{"path", path}, {"overridden_cells", p.override_count()}};
  return p;
}

// Classified records ready for analysis, with exclusions disclosed.
std::vector<ClassifiedRecord> classified_input(const RunConfig& cfg, json& manifest) {
  std::vector<ClassifiedRecord> records;
  if (cfg.classified) {
    require_input(cfg);
    std::ifstream in(cfg.input, std::ios::binary);
    if (!in) throw IoError("cannot open input " + cfg.input);
    records = read_classified_csv(in);
    manifest["inputs"] = json::array({input_entry(cfg.input)});
    if (indeterminate_policy(cfg) == IndeterminatePolicy::Informal)
      for (auto& r : records)
        if (r.employment == EmploymentClass::Indeterminate) {
          r.employment = EmploymentClass::Informal;
          r.reassigned = true;
        }
  } else {
    auto g = ingest_input(cfg, manifest);
    const auto policy = load_policy(cfg, manifest);
    records = classify_dataset(accepted_records(g.results), policy, indeterminate_policy(cfg)).records;
  }

  if (cfg.min_age >= 0) {
    double kept = 0, dropped = 0;
    std::vector<ClassifiedRecord> filtered;
    for (auto& r : records) {
      if (r.record.age && *r.record.age >= cfg.min_age) {
        kept += r.record.weight;
        filtered.push_back(std::move(r));
      } else {
        dropped += r.record.weight;
      }
    }
    records = std::move(filtered);
    manifest["age_filter"] = {{"min_age", cfg.min_age},
                              {"excluded_weight", dropped},
                              {"excluded_share", kept + dropped > 0 ? dropped / (kept + dropped) : 0.0}};
  }

  ClassTally tally;
  for (const auto& r : records) {
    const auto k = static_cast<std::size_t>(r.employment);
    ++tally.counts[k];
    tally.weights[k] += r.record.weight;
    if (r.reassigned) {
      ++tally.reassigned_count;
      tally.reassigned_weight += r.record.weight;
    }
  }
  manifest["classification"] = to_json(tally);
  manifest["indeterminate_policy"] = cfg.indeterminate;
  manifest["indeterminate_excluded_share"] = tally.share(EmploymentClass::Indeterminate);
  return records;
}

// Drops Indeterminate records and, when asked, the top MPCE tail by weight.
std::vector<const ClassifiedRecord*> analysis_rows(const RunConfig& cfg, const std::vector<ClassifiedRecord>& all,
                                                   json& manifest) {
  std::vector<const ClassifiedRecord*> rows;
  for (const auto& r : all)
    if (r.employment != EmploymentClass::Indeterminate) rows.push_back(&r);
  if (cfg.trim_top > 0.0) {
    double total = 0;
    for (const auto* r : rows) total += r->record.weight;
    std::vector<const ClassifiedRecord*> sorted = rows;
    std::stable_sort(sorted.begin(), sorted.end(),
                     [](const auto* a, const auto* b) { return a->record.mpce < b->record.mpce; });
    const double keep_weight = (1.0 - cfg.trim_top) * total;
    double cum = 0, cutoff = sorted.empty() ? 0.0 : sorted.back()->record.mpce;
    for (const auto* r : sorted) {
      cum += r->record.weight;
      if (cum >= keep_weight) {
        cutoff = r->record.mpce;
        break;
      }
    }
    double dropped = 0;
    std::vector<const ClassifiedRecord*> kept;
    for (const auto* r : rows) {
      if (r->record.mpce <= cutoff)
        kept.push_back(r);
      else
        dropped += r->record.weight;
    }
    rows = std::move(kept);
    manifest["trim"] = {{"top_fraction", cfg.trim_top},
                        {"mpce_cutoff", cutoff},
                        {"excluded_weight", dropped},
                        {"excluded_share", total > 0 ? dropped / total : 0.0}};
  }
  if (rows.empty()) throw StatsError("empty-sample", "no Formal or Informal records remain for analysis");
  return rows;
}

void report_warnings(const DecompositionResult& r, std::ostream& err, const std::string& where) {
  for (const auto& w : r.warnings) err << "warning: " << where << ": " << w << '\n';
}

// ---------------------------------------------------------------------------

int cmd_ingest(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  json manifest;
  auto g = ingest_input(cfg, manifest);
  Artifacts a(cfg, out);
  const auto records = accepted_records(g.results);
  if (cfg.format == "json")
    a.write("ingest.records.jsonl", [&](std::ostream& o) { write_records_jsonl(o, records); });
  else
    a.write("ingest.records.csv", [&](std::ostream& o) { write_records_csv(o, records); });
  a.write("ingest.errors.csv", [&](std::ostream& o) { write_errors_csv(o, g.results); });
  a.write("ingest.report.json", [&](std::ostream& o) { o << to_json(g.report).dump(2) << '\n'; });
  a.manifest("ingest", manifest);
  out << fmt::format("lines {}, accepted {}, rejected {} (weighted share {:.4f})\n", g.report.lines,
                     g.report.accepted, g.report.rejected, g.report.rejected_weight_share);
  if (g.report.accepted == 0 && g.report.lines > 0) err << "warning: no record was accepted\n";
  return kOk;
}

int cmd_classify(const RunConfig& cfg, std::ostream& out, std::ostream&) {
  json manifest;
  const auto records = classified_input(cfg, manifest);
  Artifacts a(cfg, out);
  if (cfg.format == "json")
    a.write("classify.records.jsonl", [&](std::ostream& o) { write_classified_jsonl(o, records); });
  else
    a.write("classify.records.csv", [&](std::ostream& o) { write_classified_csv(o, records); });
  a.write("classify.tally.json", [&](std::ostream& o) { o << manifest["classification"].dump(2) << '\n'; });
  a.manifest("classify", manifest);
  const auto& t = manifest["classification"]["weighted_shares"];
  out << fmt::format("records {}: formal {:.4f}, informal {:.4f}, indeterminate {:.4f} (weighted)\n",
                     records.size(), t["Formal"].get<double>(), t["Informal"].get<double>(),
                     t["Indeterminate"].get<double>());
  return kOk;
}

int cmd_tabulate(const RunConfig& cfg, std::ostream& out, std::ostream&) {
  const Category primary = category_arg(cfg.category.empty() ? "occupation" : cfg.category, "--category");
  json manifest;
  const auto records = classified_input(cfg, manifest);
  Artifacts a(cfg, out);
  const std::string stem = "tabulate." + std::string(category_name(primary)) +
                           (cfg.secondary.empty() ? "" : "." + cfg.secondary);
  if (cfg.secondary.empty()) {
    const auto t = share_table(records, primary);
    manifest["excluded_share"] = t.excluded_share;
    a.write(stem + "." + a.ext(), [&](std::ostream& o) {
      if (cfg.format == "json")
        o << to_json(t).dump(2) << '\n';
      else
        write_csv(o, t);
    });
    out << fmt::format("{} rows, indeterminate weight excluded {:.4f}\n", t.rows.size(), t.excluded_share);
  } else {
    const Category secondary = category_arg(cfg.secondary, "--secondary");
    const auto t = cross_tab(records, secondary, primary);
    manifest["excluded_share"] = t.excluded_share;
    a.write(stem + "." + a.ext(), [&](std::ostream& o) {
      if (cfg.format == "json")
        o << to_json(t).dump(2) << '\n';
      else
        write_csv(o, t);
    });
    out << fmt::format("{} cells, indeterminate weight excluded {:.4f}\n", t.cells.size(), t.excluded_share);
  }
  manifest["category"] = category_name(primary);
  manifest["secondary"] = cfg.secondary;
  a.manifest(stem, manifest);
  return kOk;
}

int cmd_decompose(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  const Category key = category_arg(cfg.category.empty() ? "employment_class" : cfg.category, "--category");
  json manifest;
  const auto records = classified_input(cfg, manifest);
  const auto rows = analysis_rows(cfg, records, manifest);
  std::vector<double> v, w;
  std::vector<std::string> labels;
  for (const auto* r : rows) {
    v.push_back(r->record.mpce);
    w.push_back(r->record.weight);
    labels.push_back(category_value(*r, key));
  }
  const auto declared = declared_labels(key);
  const auto sample = GroupedSample::from_labels(std::string(category_name(key)), std::move(v), std::move(w),
                                                 labels, declared);
  const auto result = decompose(sample, cfg.alpha, {cfg.threads});
  report_warnings(result, err, "decompose");

  Artifacts a(cfg, out);
  const std::string stem = "decompose." + std::string(category_name(key));
  a.write(stem + "." + a.ext(), [&](std::ostream& o) {
    if (cfg.format == "json")
      o << to_json(result).dump(2) << '\n';
    else
      write_csv(o, result);
  });
  manifest["alpha"] = cfg.alpha;
  manifest["key"] = category_name(key);
  manifest["records_used"] = rows.size();
  manifest["warnings"] = result.warnings;
  a.manifest(stem, manifest);
  out << fmt::format("I = {:.6f}, within {:.2f}%, between {:.2f}%\n", result.total.value,
                     result.share_within_percent, result.share_between_percent);
  return result.degenerate() ? kDegenerate : kOk;
}

int cmd_nested(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  const Category outer = category_arg(cfg.outer_key, "--outer-key");
  const Category inner = category_arg(cfg.inner_key, "--inner-key");
  json manifest;
  const auto records = classified_input(cfg, manifest);
  const auto rows = analysis_rows(cfg, records, manifest);
  std::vector<double> v, w;
  std::vector<std::string> outer_labels, inner_labels;
  for (const auto* r : rows) {
    v.push_back(r->record.mpce);
    w.push_back(r->record.weight);
    outer_labels.push_back(category_value(*r, outer));
    inner_labels.push_back(category_value(*r, inner));
  }
  const auto sample = NestedSample::from_labels(std::string(category_name(outer)), std::string(category_name(inner)),
                                                std::move(v), std::move(w), outer_labels, inner_labels);
  const auto result = nested_decompose(sample, cfg.alpha, {cfg.threads});
  report_warnings(result.outer, err, "outer");
  bool degenerate = result.outer.degenerate();
  for (const auto& b : result.inner) {
    if (b.empty) continue;
    report_warnings(b.local, err, b.outer_label);
  }

  Artifacts a(cfg, out);
  const std::string stem =
      "nested-decompose." + std::string(category_name(outer)) + "." + std::string(category_name(inner));
  a.write(stem + "." + a.ext(), [&](std::ostream& o) {
    if (cfg.format == "json")
      o << to_json(result).dump(2) << '\n';
    else
      write_csv(o, result);
  });
  manifest["alpha"] = cfg.alpha;
  manifest["outer_key"] = category_name(outer);
  manifest["inner_key"] = category_name(inner);
  manifest["records_used"] = rows.size();
  a.manifest(stem, manifest);
  out << fmt::format("I = {:.6f}, outer between {:.2f}%, leaves and between terms sum to {:.6f}%\n",
                     result.outer.total.value, result.outer.share_between_percent, result.total_percent);
  return degenerate ? kDegenerate : kOk;
}

int cmd_validate(const RunConfig& cfg, std::ostream& out, std::ostream&) {
  const std::string fixture =
      cfg.input.empty() ? env_or("INFORMALITY_FIXTURE", (data_dir() / "fixtures" / "table1_nsso68.csv").string())
                        : cfg.input;
  if (!fs::exists(fixture)) throw ConfigError("fixture does not exist: " + fixture);
  const auto report = validate_published_table(load_published_table(fixture), cfg.alpha);
  Artifacts a(cfg, out);
  const std::string stem = "validate-table." + fs::path(fixture).stem().string();
  a.write(stem + "." + a.ext(), [&](std::ostream& o) {
    if (cfg.format == "json")
      o << to_json(report).dump(2) << '\n';
    else
      write_csv(o, report);
  });
  json manifest{{"inputs", json::array({input_entry(fixture)})},
                {"alpha", cfg.alpha},
                {"contributions_ok", report.contributions_ok},
                {"discrepancies", report.discrepancies.size()}};
  a.manifest(stem, manifest);

  std::size_t failed = 0;
  for (const auto& c : report.cells) failed += !c.pass;
  out << fmt::format("cells checked {}, outside tolerance {}\n", report.cells.size(), failed);
  out << fmt::format("max |dC_w| {:.5f}, max |dC_t| {:.4f} pp, max |dI| {:.5f}\n", report.max_cw_deviation,
                     report.max_ct_deviation, report.max_index_deviation);
  for (const auto& id : report.identities)
    if (!id.pass)
      out << fmt::format("identity off: {} / {}: {:.5f} vs {:.5f}\n", id.level, id.name, id.value, id.expected);
  for (const auto& d : report.discrepancies)
    out << fmt::format("discrepancy: {}: {} ({} vs {})\n", d.level, d.description, format_double(d.first),
                       format_double(d.second));
  return report.contributions_ok ? kOk : kValidationFailed;
}

int cmd_synth(const RunConfig& cfg, std::ostream& out, std::ostream&) {
  const std::string layout_path =
      cfg.layout.empty() ? env_or("INFORMALITY_LAYOUT", (data_dir() / "layouts" / "extract_fixed.layout").string())
                         : cfg.layout;
  const auto layout = load_layout(layout_path);
  const auto recode_paths = resolve_recodes(cfg);
  const auto recodes = load_recodes(recode_paths);
  const auto records = synthetic_records(cfg.count, cfg.seed);
  Artifacts a(cfg, out);
  const bool csv = layout.format == InputFormat::Csv;
  const std::string stem = "synth." + fs::path(layout_path).stem().string();
  a.write(stem + (csv ? ".csv" : ".dat"), [&](std::ostream& o) {
    if (csv) o << csv_join(csv_header(layout), layout.delimiter) << '\n';
    for (const auto& r : records) {
      if (csv)
        o << csv_join(format_csv_fields(r, layout, recodes), layout.delimiter) << '\n';
      else
        o << format_fixed_width(r, layout, recodes) << '\n';
    }
  });
  json manifest{{"inputs", json::array({input_entry(layout_path)})}, {"seed", cfg.seed}, {"count", cfg.count}};
  a.manifest(stem, manifest);
  return kOk;
}

}  // namespace

std::vector<ObservationRecord> synthetic_records(std::size_t count, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::normal_distribution<double> z(0.0, 1.0);
  auto pick = [&](std::initializer_list<double> probs) {
    double x = u(rng);
    std::size_t i = 0;
    for (double p : probs) {
      if (x < p) return i;
      x -= p;
      ++i;
    }
    return i - 1;
  };
  // Occupation mix tilted towards agriculture and elementary work.
  const std::initializer_list<double> occupation_mix = {0.07, 0.04, 0.03, 0.02, 0.07, 0.30, 0.13, 0.05, 0.29};

  std::vector<ObservationRecord> out;
  out.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    ObservationRecord r;
    r.record_id = fmt::format("S{:07d}", i + 1);
    r.weight = std::round(u(rng) * 500000.0 + 5000.0) / 100.0;
    const std::size_t occ = pick(occupation_mix);
    r.occupation = std::to_string(occ + 1);
    r.industry = std::to_string(1 + static_cast<int>(u(rng) * 21));
    r.sector = std::string(kSectorLabels[u(rng) < 0.65 ? 0 : 1]);
    r.gender = std::string(kGenderLabels[u(rng) < 0.75 ? 0 : 1]);
    r.social_group = std::string(kSocialGroupLabels[pick({0.10, 0.19, 0.42, 0.29})]);
    if (u(rng) < 0.98) {
      r.age = 15 + static_cast<int>(u(rng) * 60);
      r.age_group = age_group_for(*r.age);
    }
    r.region = fmt::format("R{:02d}", 1 + static_cast<int>(u(rng) * 12));

    r.enterprise.ownership = static_cast<Ownership>(pick({0.70, 0.15, 0.12, 0.03}));
    if (r.enterprise.ownership == Ownership::ProprietaryOrPartnership)
      r.enterprise.size_class = static_cast<SizeClass>(pick({0.88, 0.10, 0.02}));
    else
      r.enterprise.size_class = static_cast<SizeClass>(pick({0.30, 0.68, 0.02}));
    r.job.status = static_cast<JobStatus>(pick({0.18, 0.32, 0.48, 0.02}));
    if (r.job.status == JobStatus::RegularWage)
      r.job.social_security = static_cast<SocialSecurity>(pick({0.45, 0.52, 0.03}));
    else
      r.job.social_security = static_cast<SocialSecurity>(pick({0.03, 0.94, 0.03}));

    const bool formal = classify_worker(classify_enterprise(r.enterprise), r.job) == EmploymentClass::Formal;
    const double log_mean = 7.2 + 0.09 * static_cast<double>(8 - occ) + (formal ? 0.75 : 0.0) +
                            (r.sector == "Urban" ? 0.3 : 0.0);
    r.mpce = std::max(1.0, std::round(std::exp(log_mean + 0.55 * z(rng)) * 100.0)) / 100.0;
    out.push_back(std::move(r));
  }
  return out;
}

int run(std::span<const std::string> args, std::ostream& out, std::ostream& err) {
  RunConfig cfg;
  CLI::App app{"Informal employment classification and GE inequality decomposition", "informality"};
  app.set_version_flag("--version", INFORMALITY_VERSION);
  app.require_subcommand(1);

  const auto common = [&](CLI::App* sub) {
    sub->add_option("--output-dir", cfg.output_dir, "Directory for outputs (env INFORMALITY_OUTPUT_DIR)");
    sub->add_option("--format", cfg.format, "Output format")->check(CLI::IsMember({"csv", "json"}));
  };
  const auto records_input = [&](CLI::App* sub) {
    sub->add_option("--input", cfg.input, "Survey extract (fixed-width or CSV)");
    sub->add_option("--layout", cfg.layout, "Layout descriptor (env INFORMALITY_LAYOUT)");
    sub->add_option("--recodes", cfg.recodes, "Recode map files or directories (env INFORMALITY_RECODES)");
  };
  const auto analysis = [&](CLI::App* sub) {
    records_input(sub);
    sub->add_option("--policy", cfg.policy, "Classification policy overrides (env INFORMALITY_POLICY)");
    sub->add_option("--indeterminate", cfg.indeterminate, "Handling of Indeterminate workers")
        ->check(CLI::IsMember({"exclude", "informal"}));
    sub->add_option("--min-age", cfg.min_age, "Keep only workers of at least this age")->check(CLI::NonNegativeNumber);
    sub->add_flag("--classified", cfg.classified, "Input is a classified-record CSV from 'classify'");
  };
  const auto index_options = [&](CLI::App* sub) {
    sub->add_option("--alpha", cfg.alpha, "GE parameter")->capture_default_str();
    sub->add_option("--trim-top", cfg.trim_top, "Drop this top fraction of MPCE by weight (default off)")
        ->check(CLI::Range(0.0, 0.5));
    sub->add_option("--threads", cfg.threads, "Worker threads, 0 for all cores")->capture_default_str();
  };

  auto* ingest = app.add_subcommand("ingest", "Parse an extract into normalised records and an error report");
  records_input(ingest);
  common(ingest);

  auto* classify = app.add_subcommand("classify", "Classify workers as formal or informal");
  analysis(classify);
  common(classify);

  auto* tabulate = app.add_subcommand("tabulate", "Formal/informal shares within and across a category");
  analysis(tabulate);
  common(tabulate);
  tabulate->add_option("--category", cfg.category, "Primary category (default occupation)");
  tabulate->add_option("--secondary", cfg.secondary, "Second category for a cross-tabulation");

  auto* decomp = app.add_subcommand("decompose", "Within/between GE decomposition by one key");
  analysis(decomp);
  common(decomp);
  index_options(decomp);
  decomp->add_option("--category", cfg.category, "Grouping key (default employment_class)");

  auto* nested = app.add_subcommand("nested-decompose", "Two-level GE decomposition");
  analysis(nested);
  common(nested);
  index_options(nested);
  nested->add_option("--outer-key", cfg.outer_key)->capture_default_str();
  nested->add_option("--inner-key", cfg.inner_key)->capture_default_str();

  auto* validate = app.add_subcommand("validate-table", "Replay a published decomposition table");
  validate->add_option("--input", cfg.input, "Published-table fixture (env INFORMALITY_FIXTURE)");
  validate->add_option("--alpha", cfg.alpha, "GE parameter")->capture_default_str();
  common(validate);

  auto* synth = app.add_subcommand("synth", "Write a seeded synthetic extract under a layout");
  synth->add_option("--layout", cfg.layout, "Layout descriptor");
  synth->add_option("--recodes", cfg.recodes, "Recode map files or directories");
  synth->add_option("--count", cfg.count)->capture_default_str();
  synth->add_option("--seed", cfg.seed)->capture_default_str();
  synth->add_option("--output-dir", cfg.output_dir);

  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kConfigError;
  }
  cfg.command = app.get_subcommands().front()->get_name();

  try {
    check_alpha(cfg.alpha);
    if (cfg.command == "ingest") return cmd_ingest(cfg, out, err);
    if (cfg.command == "classify") return cmd_classify(cfg, out, err);
    if (cfg.command == "tabulate") return cmd_tabulate(cfg, out, err);
    if (cfg.command == "decompose") return cmd_decompose(cfg, out, err);
    if (cfg.command == "nested-decompose") return cmd_nested(cfg, out, err);
    if (cfg.command == "validate-table") return cmd_validate(cfg, out, err);
    if (cfg.command == "synth") return cmd_synth(cfg, out, err);
    err << "error: unknown command\n";
    return kConfigError;
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << '\n';
    return kConfigError;
  } catch (const LayoutError& e) {
    err << "layout error: " << e.what() << '\n';
    return kConfigError;
  } catch (const RecodeError& e) {
    err << "recode error: " << e.what() << '\n';
    return kConfigError;
  } catch (const PolicyError& e) {
    err << "policy error: " << e.what() << '\n';
    return kConfigError;
  } catch (const FixtureError& e) {
    err << "parse error: " << e.what() << '\n';
    return kParseError;
  } catch (const IoError& e) {
    err << "i/o error: " << e.what() << '\n';
    return kParseError;
  } catch (const StatsError& e) {
    err << "degenerate statistics (" << e.code() << "): " << e.what() << '\n';
    return e.code() == "non-finite" && !std::isfinite(cfg.alpha) ? kConfigError : kDegenerate;
  } catch (const std::exception& e) {
    err << "unexpected error: " << e.what() << '\n';
    return kUnexpected;
  }
}

}  // namespace informality::cli
