#pragma once

#include <cstddef>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "semideg/polynomial.hpp"

namespace semideg {

enum class VarKind { Coordinate, Atom, Parameter };

/// An adjoined square root r with r^2 = radicand(coordinates).
struct RadicalAtom {
  std::string name;
  Polynomial radicand;
};

/// Coordinate chart: coordinate names, radical atoms and constant parameters.
///
/// Polynomial variables are numbered coordinates first, then atoms, then
/// parameters. Appending parameters never renumbers existing variables, so a
/// chart extended with with_parameters() can host values built on the original.
class Chart {
 public:
  Chart(std::vector<std::string> coordinates, std::vector<RadicalAtom> atoms = {},
        std::vector<std::string> parameters = {});

  std::size_t dim() const { return coords_.size(); }
  std::size_t num_atoms() const { return atoms_.size(); }
  std::size_t num_parameters() const { return params_.size(); }
  std::size_t num_variables() const { return dim() + num_atoms() + num_parameters(); }

  std::size_t coordinate_var(std::size_t i) const { return i; }
  std::size_t atom_var(std::size_t a) const { return dim() + a; }
  std::size_t parameter_var(std::size_t p) const { return dim() + num_atoms() + p; }
  std::size_t variable(VarKind kind, std::size_t local) const;

  VarKind kind(std::size_t var) const;
  /// Index within its own kind.
  std::size_t local_index(std::size_t var) const;
  const std::string& name(std::size_t var) const;

  const std::vector<std::string>& coordinates() const { return coords_; }
  const std::vector<RadicalAtom>& atoms() const { return atoms_; }
  const std::vector<std::string>& parameters() const { return params_; }
  const RadicalAtom& atom(std::size_t a) const { return atoms_.at(a); }

  /// Global variable index for a name, if declared.
  std::optional<std::size_t> find(std::string_view name) const;
  std::optional<std::size_t> find_atom_by_radicand(const Polynomial& radicand) const;

  /// Declares a new atom; returns its local atom index.
  std::size_t add_atom(std::string name, Polynomial radicand);
  std::size_t add_parameter(std::string name);

  /// Same chart with extra parameters appended.
  std::shared_ptr<const Chart> with_parameters(const std::vector<std::string>& extra) const;

  /// True when `other` declares the same coordinates and atoms and at least these parameters.
  bool embeds_into(const Chart& other) const;

 private:
  void validate_name(const std::string& name) const;

  std::vector<std::string> coords_;
  std::vector<RadicalAtom> atoms_;
  std::vector<std::string> params_;
};

using ChartPtr = std::shared_ptr<const Chart>;

/// Euclidean-style chart with the given coordinate names and no atoms.
ChartPtr make_chart(std::vector<std::string> coordinates);

bool is_identifier(std::string_view name);

}  // namespace semideg
