#pragma once

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "qstack/descent.hpp"

namespace qstack::site {

struct Location {
  std::size_t line = 0;
  std::size_t column = 0;
};

std::string to_string(const Location& loc);

// Parse failures and load failures. The violation is set when a module
// check rejected the declaration.
class SiteError : public Error {
 public:
  SiteError(ErrorKind kind, Location loc, std::string decl, const std::string& message,
            std::optional<Violation> violation = std::nullopt);

  const Location& location() const { return loc_; }
  const std::string& declaration() const { return decl_; }
  const std::optional<Violation>& violation() const { return violation_; }

 private:
  Location loc_;
  std::string decl_;
  std::optional<Violation> violation_;
};

// ---------------------------------------------------------------------------
// Syntax

struct Value {
  enum class Kind { Atom, List, Dict };

  Kind kind = Kind::Atom;
  std::string atom;
  std::vector<Value> items;
  std::vector<std::pair<std::string, Value>> entries;
  Location loc;

  static Value make_atom(std::string a, Location loc = {});
  static Value make_list(std::vector<Value> items, Location loc = {});
  static Value make_dict(std::vector<std::pair<std::string, Value>> entries, Location loc = {});

  // Structural; locations are ignored.
  friend bool operator==(const Value& a, const Value& b);
};

struct Field {
  std::string name;
  Value value;
  Location loc;

  friend bool operator==(const Field& a, const Field& b) { return a.name == b.name && a.value == b.value; }
};

struct Decl {
  std::string kind;
  std::string name;
  std::vector<Field> fields;
  Location loc;

  const Field* field(std::string_view name) const;
  friend bool operator==(const Decl& a, const Decl& b) {
    return a.kind == b.kind && a.name == b.name && a.fields == b.fields;
  }
};

struct Document {
  std::vector<Decl> decls;
  friend bool operator==(const Document& a, const Document& b) { return a.decls == b.decls; }
};

// Throws SiteError(SyntaxError).
Document parse_document(std::string_view text);
std::string print_document(const Document& doc);
std::string print_value(const Value& v);

// ---------------------------------------------------------------------------
// Semantics

struct LoadOptions {
  // Keep rejected groups as violations instead of failing the load.
  bool defer_group_checks = false;
};

struct GluingSpec {
  CoveringFamily cover;
  QSObject src;
  QSObject dst;
  std::vector<FinMap> locals;  // maps restrict(src, f_i) -> restrict(dst, f_i)
};

// A loaded site file. Sets, maps, covers and cross-references are checked
// on load, and groups unless deferred; actions, bundles, objects, data and
// gluings keep their check outcome for the commands to report.
class SiteFile {
 public:
  // Throws SiteError: UnresolvedReference, ValidationError.
  static SiteFile load(Document doc, const LoadOptions& options = {});
  static SiteFile load_text(std::string_view text, const LoadOptions& options = {});
  static SiteFile load_file(const std::string& path, const LoadOptions& options = {});

  const Document& document() const { return doc_; }
  std::vector<const Decl*> decls(std::string_view kind) const;

  const FinSet& set(const std::string& name) const { return sets_.at(name); }
  const FinMap& map(const std::string& name) const { return maps_.at(name); }
  const CoveringFamily& cover(const std::string& name) const { return covers_.at(name); }
  const Outcome<FinGroup>& group(const std::string& name) const { return groups_.at(name); }
  const Outcome<GAction>& action(const std::string& name) const { return actions_.at(name); }
  const Outcome<EquivariantMap>& equivariant(const std::string& name) const { return equivariants_.at(name); }
  const Outcome<Bundle>& bundle(const std::string& name) const { return bundles_.at(name); }
  const Outcome<QuotientStack>& stack(const std::string& name) const { return stacks_.at(name); }
  const Outcome<QSObject>& object(const std::string& name) const { return objects_.at(name); }
  const Outcome<DescentDatum>& datum(const std::string& name) const { return data_.at(name); }
  const Outcome<GluingSpec>& gluing(const std::string& name) const { return gluings_.at(name); }
  // Name of the stack a datum is declared for.
  const std::string& datum_stack(const std::string& name) const { return datum_stack_.at(name); }

 private:
  Document doc_;
  std::map<std::string, FinSet> sets_;
  std::map<std::string, FinMap> maps_;
  std::map<std::string, CoveringFamily> covers_;
  std::map<std::string, Outcome<FinGroup>> groups_;
  std::map<std::string, Outcome<GAction>> actions_;
  std::map<std::string, Outcome<EquivariantMap>> equivariants_;
  std::map<std::string, Outcome<Bundle>> bundles_;
  std::map<std::string, Outcome<QuotientStack>> stacks_;
  std::map<std::string, Outcome<QSObject>> objects_;
  std::map<std::string, Outcome<DescentDatum>> data_;
  std::map<std::string, Outcome<GluingSpec>> gluings_;
  std::map<std::string, std::string> datum_stack_;

  friend class Loader;
};

}  // namespace qstack::site
