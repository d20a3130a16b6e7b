#include "semideg/chart.hpp"

#include <cctype>

#include "semideg/errors.hpp"

namespace semideg {

bool is_identifier(std::string_view name) {
  if (name.empty()) return false;
  if (!(std::isalpha(static_cast<unsigned char>(name[0])) || name[0] == '_')) return false;
  for (char c : name)
    if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '_')) return false;
  return name != "ln" && name != "sqrt";
}

Chart::Chart(std::vector<std::string> coordinates, std::vector<RadicalAtom> atoms,
             std::vector<std::string> parameters) {
  if (coordinates.size() < 2) throw InvalidChart("a chart needs at least two coordinates");
  for (auto& c : coordinates) {
    validate_name(c);
    coords_.push_back(std::move(c));
  }
  for (auto& a : atoms) add_atom(std::move(a.name), std::move(a.radicand));
  for (auto& p : parameters) add_parameter(std::move(p));
}

void Chart::validate_name(const std::string& name) const {
  if (!is_identifier(name)) throw InvalidChart("'" + name + "' is not a valid identifier");
  if (find(name)) throw InvalidChart("duplicate name '" + name + "'");
}

std::size_t Chart::add_atom(std::string name, Polynomial radicand) {
  validate_name(name);
  if (num_variables() + 1 > kMaxVariables) throw InvalidChart("too many chart variables");
  if (radicand.is_constant()) throw InvalidChart("radicand of '" + name + "' must be non-constant");
  for (const auto& t : radicand.terms())
    for (std::size_t v = dim(); v < kMaxVariables; ++v)
      if (t.monomial[v] != 0) throw InvalidChart("radicand of '" + name + "' may only use coordinates");
  // Parameter indices shift by one here; only do this before values are built on the chart.
  atoms_.push_back({std::move(name), std::move(radicand)});
  return atoms_.size() - 1;
}

std::size_t Chart::add_parameter(std::string name) {
  validate_name(name);
  if (num_variables() + 1 > kMaxVariables) throw InvalidChart("too many chart variables");
  params_.push_back(std::move(name));
  return params_.size() - 1;
}

std::size_t Chart::variable(VarKind kind, std::size_t local) const {
  switch (kind) {
    case VarKind::Coordinate: return coordinate_var(local);
    case VarKind::Atom: return atom_var(local);
    case VarKind::Parameter: return parameter_var(local);
  }
  return 0;
}

VarKind Chart::kind(std::size_t var) const {
  if (var < dim()) return VarKind::Coordinate;
  if (var < dim() + num_atoms()) return VarKind::Atom;
  return VarKind::Parameter;
}

std::size_t Chart::local_index(std::size_t var) const {
  switch (kind(var)) {
    case VarKind::Coordinate: return var;
    case VarKind::Atom: return var - dim();
    case VarKind::Parameter: return var - dim() - num_atoms();
  }
  return 0;
}

const std::string& Chart::name(std::size_t var) const {
  switch (kind(var)) {
    case VarKind::Coordinate: return coords_.at(var);
    case VarKind::Atom: return atoms_.at(var - dim()).name;
    case VarKind::Parameter: return params_.at(var - dim() - num_atoms());
  }
  return coords_.front();
}

std::optional<std::size_t> Chart::find(std::string_view name) const {
  for (std::size_t i = 0; i < coords_.size(); ++i)
    if (coords_[i] == name) return coordinate_var(i);
  for (std::size_t i = 0; i < atoms_.size(); ++i)
    if (atoms_[i].name == name) return atom_var(i);
  for (std::size_t i = 0; i < params_.size(); ++i)
    if (params_[i] == name) return parameter_var(i);
  return std::nullopt;
}

std::optional<std::size_t> Chart::find_atom_by_radicand(const Polynomial& radicand) const {
  for (std::size_t i = 0; i < atoms_.size(); ++i)
    if (atoms_[i].radicand == radicand) return i;
  return std::nullopt;
}

std::shared_ptr<const Chart> Chart::with_parameters(const std::vector<std::string>& extra) const {
  auto out = std::make_shared<Chart>(*this);
  for (const auto& p : extra) out->add_parameter(p);
  return out;
}

bool Chart::embeds_into(const Chart& other) const {
  if (coords_ != other.coords_ || atoms_.size() != other.atoms_.size() || params_.size() > other.params_.size())
    return false;
  for (std::size_t i = 0; i < atoms_.size(); ++i)
    if (atoms_[i].name != other.atoms_[i].name || !(atoms_[i].radicand == other.atoms_[i].radicand)) return false;
  for (std::size_t i = 0; i < params_.size(); ++i)
    if (params_[i] != other.params_[i]) return false;
  return true;
}

ChartPtr make_chart(std::vector<std::string> coordinates) {
  return std::make_shared<const Chart>(std::move(coordinates));
}

}  // namespace semideg
