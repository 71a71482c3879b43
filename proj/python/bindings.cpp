#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <optional>
#include <stdexcept>

#include "informality/decompose.hpp"
#include "informality/published_table.hpp"
#include "informality/taxonomy.hpp"

namespace py = pybind11;
using namespace informality;

namespace {

std::vector<double> weights_or_ones(const std::optional<std::vector<double>>& weights, std::size_t n) {
  return weights ? *weights : std::vector<double>(n, 1.0);
}

py::dict to_dict(const DecompositionResult& r) {
  py::list rows;
  for (const auto& row : r.rows) {
    py::dict d;
    d["label"] = row.label;
    d["count"] = row.count;
    d["weight"] = row.weight;
    d["P"] = row.P;
    d["R"] = row.R;
    d["mean"] = row.mean;
    d["W"] = row.W;
    d["index"] = row.index.value;
    d["C_w"] = row.C_w;
    d["C_t_percent"] = row.C_t_percent;
    d["empty"] = row.empty;
    rows.append(d);
  }
  py::dict d;
  d["key"] = r.key;
  d["alpha"] = r.alpha;
  d["total"] = r.total.value;
  d["within"] = r.within;
  d["between"] = r.between;
  d["share_within_percent"] = r.share_within_percent;
  d["share_between_percent"] = r.share_between_percent;
  d["warnings"] = r.warnings;
  d["rows"] = rows;
  return d;
}

template <typename T>
T parse_or_throw(std::optional<T> v, const std::string& what, const std::string& text) {
  if (!v) throw py::value_error("unknown " + what + " '" + text + "'");
  return *v;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Generalized entropy decomposition and informal employment classification";
  py::register_exception<StatsError>(m, "StatsError", PyExc_ValueError);
  py::register_exception<FixtureError>(m, "FixtureError", PyExc_ValueError);
  m.attr("DEFAULT_ALPHA") = kDefaultAlpha;

  m.def(
      "weighted_mean",
      [](std::vector<double> values, std::optional<std::vector<double>> weights) {
        const auto w = weights_or_ones(weights, values.size());
        return weighted_mean(WeightedSample(std::move(values), w));
      },
      py::arg("values"), py::arg("weights") = py::none());

  m.def(
      "ge_index",
      [](std::vector<double> values, std::optional<std::vector<double>> weights, double alpha, unsigned threads) {
        const auto w = weights_or_ones(weights, values.size());
        py::gil_scoped_release release;
        return ge_index(WeightedSample(std::move(values), w), alpha, {threads}).value;
      },
      py::arg("values"), py::arg("weights") = py::none(), py::arg("alpha") = kDefaultAlpha,
      py::arg("threads") = 1u);

  m.def(
      "ge_curve",
      [](std::vector<double> values, std::vector<double> alphas, std::optional<std::vector<double>> weights) {
        const auto w = weights_or_ones(weights, values.size());
        std::vector<double> out;
        for (const auto& g : ge_curve(WeightedSample(std::move(values), w), alphas)) out.push_back(g.value);
        return out;
      },
      py::arg("values"), py::arg("alphas"), py::arg("weights") = py::none());

  m.def(
      "decompose",
      [](std::vector<double> values, std::vector<std::string> labels, std::optional<std::vector<double>> weights,
         double alpha, std::vector<std::string> declared, unsigned threads) {
        const auto w = weights_or_ones(weights, values.size());
        const auto s = GroupedSample::from_labels("key", std::move(values), w, labels, declared);
        return to_dict(decompose(s, alpha, {threads}));
      },
      py::arg("values"), py::arg("labels"), py::arg("weights") = py::none(), py::arg("alpha") = kDefaultAlpha,
      py::arg("declared") = std::vector<std::string>{}, py::arg("threads") = 1u);

  m.def(
      "nested_decompose",
      [](std::vector<double> values, std::vector<std::string> outer, std::vector<std::string> inner,
         std::optional<std::vector<double>> weights, double alpha, unsigned threads) {
        const auto w = weights_or_ones(weights, values.size());
        const auto s = NestedSample::from_labels("outer", "inner", std::move(values), w, outer, inner);
        const auto r = nested_decompose(s, alpha, {threads});
        py::list blocks;
        for (const auto& b : r.inner) {
          py::dict d;
          d["outer_label"] = b.outer_label;
          d["outer_W"] = b.outer_W;
          d["local"] = b.empty ? py::object(py::none()) : py::object(to_dict(b.local));
          d["leaf_C_t_percent"] = b.leaf_C_t_percent;
          d["within_percent_of_total"] = b.within_percent_of_total;
          d["between_percent_of_total"] = b.between_percent_of_total;
          d["empty"] = b.empty;
          blocks.append(d);
        }
        py::dict d;
        d["outer"] = to_dict(r.outer);
        d["inner"] = blocks;
        d["total_percent"] = r.total_percent;
        return d;
      },
      py::arg("values"), py::arg("outer"), py::arg("inner"), py::arg("weights") = py::none(),
      py::arg("alpha") = kDefaultAlpha, py::arg("threads") = 1u);

  m.def(
      "classify_enterprise",
      [](const std::string& ownership, const std::string& size_class) {
        const EnterpriseProfile e{parse_or_throw(parse_ownership(ownership), "ownership", ownership),
                                  parse_or_throw(parse_size_class(size_class), "size class", size_class)};
        return std::string(to_string(classify_enterprise(e)));
      },
      py::arg("ownership"), py::arg("size_class"));

  m.def(
      "classify_worker",
      [](const std::string& sector, const std::string& status, const std::string& social_security) {
        const auto s = parse_or_throw(parse_sector_class(sector), "sector class", sector);
        const JobProfile job{parse_or_throw(parse_job_status(status), "job status", status),
                             parse_or_throw(parse_social_security(social_security), "social security",
                                            social_security)};
        return std::string(to_string(classify_worker(s, job)));
      },
      py::arg("sector"), py::arg("status"), py::arg("social_security"));

  m.def(
      "validate_table",
      [](const std::string& path, double alpha) {
        const auto r = validate_published_table(load_published_table(path), alpha);
        py::list groups, discrepancies;
        for (const auto& g : r.groups)
          groups.append(py::dict(py::arg("level") = g.level, py::arg("label") = g.label, py::arg("W") = g.W,
                                 py::arg("C_w") = g.C_w, py::arg("C_t_percent") = g.C_t_percent));
        for (const auto& x : r.discrepancies)
          discrepancies.append(py::dict(py::arg("level") = x.level, py::arg("description") = x.description,
                                        py::arg("first") = x.first, py::arg("second") = x.second));
        py::dict d;
        d["alpha"] = r.alpha;
        d["contributions_ok"] = r.contributions_ok;
        d["max_cw_deviation"] = r.max_cw_deviation;
        d["max_ct_deviation"] = r.max_ct_deviation;
        d["max_index_deviation"] = r.max_index_deviation;
        d["groups"] = groups;
        d["discrepancies"] = discrepancies;
        return d;
      },
      py::arg("path"), py::arg("alpha") = kDefaultAlpha);
}
