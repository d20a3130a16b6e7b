#include <cstdio>
#include <iomanip>
#include <sstream>

#include "json.hpp"
#include "semideg/cli/pipeline.hpp"

namespace semideg::cli {

namespace {

using Json = nlohmann::ordered_json;

std::string component_key(const Tensor& t, const Index& idx) {
  std::string k;
  for (std::size_t i = 0; i < idx.size(); ++i) k += (i ? "," : "") + t.chart()->coordinates()[idx[i]];
  return k;
}

Json tensor_json(const Tensor& t) {
  Json j = Json::object();
  t.for_each_index([&](const Index& idx) {
    if (!t[idx].is_zero()) j[component_key(t, idx)] = t[idx].to_string();
  });
  return j;
}

Json check_json(const CheckOutcome& o) {
  Json j;
  j["name"] = o.name;
  j["status"] = to_string(o.status);
  j["detail"] = o.detail;
  return j;
}

std::string sci(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2e", v);
  return buf;
}

void print_tensor(std::ostream& out, const std::string& label, const Tensor& t) {
  if (t.is_zero()) {
    out << label << " = 0\n";
    return;
  }
  out << label << "\n";
  const std::string symbol = label.substr(0, label.find(' '));
  t.for_each_index([&](const Index& idx) {
    if (!t[idx].is_zero()) out << "  " << symbol << describe_component(t, idx) << "\n";
  });
}

void print_checks(std::ostream& out, const std::vector<CheckRow>& rows) {
  for (const auto& row : rows) {
    out << "  " << std::left << std::setw(22) << row.outcome.name;
    if (row.outcome.detail.empty()) out << to_string(row.outcome.status);
    else out << std::setw(12) << to_string(row.outcome.status) << row.outcome.detail;
    out << "\n";
  }
}

std::string join(const std::vector<std::string>& v, const char* sep) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? sep : "") + v[i];
  return s;
}

}  // namespace

std::string human_report(const AnalysisReport& r) {
  std::ostringstream out;
  out << "system: " << r.name << "\n";
  out << "potentials: " << join(r.potentials, ", ") << "\n";
  if (!r.fragment) {
    const StructureReport& s = r.structure;
    out << "\n";
    print_tensor(out, "D (D_ij^m)", s.D);
    print_tensor(out, "S (trace-free symmetric part)", s.S);
    print_tensor(out, "N (obstruction)", s.N);
    print_tensor(out, "d", s.d);
    print_tensor(out, "s", s.s);
    print_tensor(out, "t", s.t);
    if (r.T) print_tensor(out, "T (T_ij^m)", *r.T);
  }
  out << "\nverdict: " << verdict_sentence(r.structure) << "\n";
  out << "\nchecks\n";
  print_checks(out, r.checks);

  if (r.extension) {
    const ExtensionResult& e = r.extension->result;
    std::vector<std::string> base, grid;
    for (double b : r.settings.base) base.push_back(Json(b).dump());
    for (auto g : r.settings.grid) grid.push_back(std::to_string(g));
    out << "\nextension\n";
    out << "  base (" << join(base, ", ") << "), grid " << join(grid, "x") << ", spacing " << r.settings.spacing
        << "\n";
    out << "  path disagreement " << sci(r.extension->path_disagreement) << ", family residual "
        << sci(e.family_residual) << "\n";
    if (e.fit_status == FitStatus::Fitted)
      out << "  fit: " << e.fit_expression << " (residual " << sci(e.fit_residual) << ")\n";
    else
      out << "  fit failed: " << e.fit_message << "\n";
  }

  if (!r.killing.empty()) {
    out << "\nkilling\n";
    out << "  " << std::left << std::setw(12) << "tensor";
    for (const auto& o : r.killing.front().checks) out << std::setw(22) << o.name;
    out << "numeric-bd\n";
    for (const auto& row : r.killing) {
      out << "  " << std::setw(12) << row.name;
      for (const auto& o : row.checks) out << std::setw(22) << to_string(o.status);
      out << (row.numeric_bd ? sci(*row.numeric_bd) : std::string("-")) << "\n";
      for (const auto& o : row.checks)
        if (!o.detail.empty() && o.status == CheckStatus::Nonzero) out << "    " << o.name << ": " << o.detail << "\n";
    }
  }

  if (!r.failures.empty()) {
    out << "\nfailed guarantees\n";
    for (const auto& f : r.failures) out << "  " << f << "\n";
  }
  out << "\nexit " << r.exit_code << "\n";
  return out.str();
}

std::string machine_report(const AnalysisReport& r) {
  Json j;
  j["system"] = r.name;
  j["input"] = r.input_text;
  if (!r.fragment) {
    Json settings;
    settings["base"] = r.settings.base;
    settings["grid"] = r.settings.grid;
    settings["spacing"] = r.settings.spacing;
    settings["tolerance"] = r.settings.tolerance;
    settings["dictionary"] = r.dictionary;
    j["settings"] = settings;
    Json tensors;
    tensors["D"] = tensor_json(r.structure.D);
    tensors["S"] = tensor_json(r.structure.S);
    tensors["N"] = tensor_json(r.structure.N);
    tensors["d"] = tensor_json(r.structure.d);
    tensors["s"] = tensor_json(r.structure.s);
    tensors["t"] = tensor_json(r.structure.t);
    if (r.T) tensors["T"] = tensor_json(*r.T);
    j["tensors"] = tensors;
  }
  j["verdict"] = r.structure.verdict == Verdict::Extendable ? "extendable" : "non-extendable";
  j["verdict_sentence"] = verdict_sentence(r.structure);
  Json checks = Json::array();
  for (const auto& row : r.checks) {
    Json c = check_json(row.outcome);
    c["guaranteed"] = row.guaranteed;
    checks.push_back(c);
  }
  j["checks"] = checks;
  if (!r.fragment) {
    if (r.extension) {
      const ExtensionResult& e = r.extension->result;
      Json x;
      x["path_disagreement"] = r.extension->path_disagreement;
      x["family_residual"] = e.family_residual;
      x["direction"] = e.direction;
      Json fit;
      fit["status"] = e.fit_status == FitStatus::Fitted ? "fitted" : "fit-failed";
      fit["message"] = e.fit_message;
      fit["coefficients"] = e.coefficients;
      Json exact = Json::array();
      for (const auto& q : e.exact_coefficients) exact.push_back(q.get_str());
      fit["exact_coefficients"] = exact;
      fit["expression"] = e.fit_expression;
      fit["residual"] = e.fit_residual;
      x["fit"] = fit;
      Json samples = Json::array();
      for (std::size_t i = 0; i < e.points.size(); ++i) {
        Json row;
        row["point"] = e.points[i];
        row["state"] = e.samples[i];
        samples.push_back(row);
      }
      x["samples"] = samples;
      j["extension"] = x;
    } else {
      j["extension"] = nullptr;
    }
    Json killing = Json::array();
    for (const auto& row : r.killing) {
      Json k;
      k["name"] = row.name;
      Json cs = Json::array();
      for (const auto& o : row.checks) cs.push_back(check_json(o));
      k["checks"] = cs;
      k["numeric_bd"] = row.numeric_bd ? Json(*row.numeric_bd) : Json(nullptr);
      killing.push_back(k);
    }
    j["killing"] = killing;
  }
  j["failures"] = r.failures;
  j["exit_code"] = r.exit_code;
  return j.dump(2) + "\n";
}

}  // namespace semideg::cli
