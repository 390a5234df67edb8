#include "qstack/site_file.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <fstream>
#include <set>
#include <sstream>

namespace qstack::site {

std::string to_string(const Location& loc) { return std::to_string(loc.line) + ":" + std::to_string(loc.column); }

SiteError::SiteError(ErrorKind kind, Location loc, std::string decl, const std::string& message,
                     std::optional<Violation> violation)
    : Error(kind, to_string(loc) + ": " + (decl.empty() ? "" : "in '" + decl + "': ") + message),
      loc_(loc),
      decl_(std::move(decl)),
      violation_(std::move(violation)) {}

Value Value::make_atom(std::string a, Location loc) {
  Value v;
  v.kind = Kind::Atom;
  v.atom = std::move(a);
  v.loc = loc;
  return v;
}

Value Value::make_list(std::vector<Value> items, Location loc) {
  Value v;
  v.kind = Kind::List;
  v.items = std::move(items);
  v.loc = loc;
  return v;
}

Value Value::make_dict(std::vector<std::pair<std::string, Value>> entries, Location loc) {
  Value v;
  v.kind = Kind::Dict;
  v.entries = std::move(entries);
  v.loc = loc;
  return v;
}

bool operator==(const Value& a, const Value& b) {
  return a.kind == b.kind && a.atom == b.atom && a.items == b.items && a.entries == b.entries;
}

const Field* Decl::field(std::string_view n) const {
  for (const auto& f : fields)
    if (f.name == n) return &f;
  return nullptr;
}

// ---------------------------------------------------------------------------
// Lexer and parser

namespace {

constexpr std::array<std::string_view, 11> kKinds = {"set",    "group", "map",    "action", "equivariant", "bundle",
                                                     "cover",  "stack", "object", "datum",  "gluing"};

bool is_word_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-' || c == '.' || c == '*' || c == '+';
}

struct Token {
  enum class Type { Word, String, Punct, End };
  Type type;
  std::string text;
  Location loc;
};

class Lexer {
 public:
  explicit Lexer(std::string_view text) : text_(text) {}

  Token next() {
    skip();
    const Location loc{line_, col_};
    if (pos_ >= text_.size()) return {Token::Type::End, "", loc};
    const char c = text_[pos_];
    if (c == '"') return string(loc);
    if (std::string_view("{}[]=;,:").find(c) != std::string_view::npos) {
      advance();
      return {Token::Type::Punct, std::string(1, c), loc};
    }
    if (is_word_char(c)) {
      std::string w;
      while (pos_ < text_.size() && is_word_char(text_[pos_])) w += advance();
      return {Token::Type::Word, w, loc};
    }
    throw SiteError(ErrorKind::SyntaxError, loc, "", std::string("unexpected character '") + c + "'");
  }

 private:
  char advance() {
    const char c = text_[pos_++];
    if (c == '\n') {
      ++line_;
      col_ = 1;
    } else if ((static_cast<unsigned char>(c) & 0xC0) != 0x80) {
      ++col_;
    }
    return c;
  }

  void skip() {
    while (pos_ < text_.size()) {
      const char c = text_[pos_];
      if (c == '#') {
        while (pos_ < text_.size() && text_[pos_] != '\n') advance();
      } else if (std::isspace(static_cast<unsigned char>(c))) {
        advance();
      } else {
        break;
      }
    }
  }

  Token string(Location loc) {
    advance();
    std::string s;
    while (true) {
      if (pos_ >= text_.size() || text_[pos_] == '\n')
        throw SiteError(ErrorKind::SyntaxError, loc, "", "unterminated string");
      const char c = advance();
      if (c == '"') break;
      if (c == '\\') {
        if (pos_ >= text_.size()) throw SiteError(ErrorKind::SyntaxError, loc, "", "unterminated string");
        const char e = advance();
        if (e != '"' && e != '\\') throw SiteError(ErrorKind::SyntaxError, loc, "", "unknown escape in string");
        s += e;
      } else {
        s += c;
      }
    }
    return {Token::Type::String, s, loc};
  }

  std::string_view text_;
  std::size_t pos_ = 0;
  std::size_t line_ = 1;
  std::size_t col_ = 1;
};

class Parser {
 public:
  explicit Parser(std::string_view text) : lex_(text) { tok_ = lex_.next(); }

  Document document() {
    Document doc;
    while (tok_.type != Token::Type::End) doc.decls.push_back(decl());
    return doc;
  }

 private:
  [[noreturn]] void fail(const std::string& what) {
    const std::string got = tok_.type == Token::Type::End ? "end of file" : "'" + tok_.text + "'";
    throw SiteError(ErrorKind::SyntaxError, tok_.loc, decl_, "expected " + what + ", found " + got);
  }

  bool at(const char* punct) const { return tok_.type == Token::Type::Punct && tok_.text == punct; }
  void expect(const char* punct) {
    if (!at(punct)) fail(std::string("'") + punct + "'");
    tok_ = lex_.next();
  }
  Token word(const char* what) {
    if (tok_.type != Token::Type::Word) fail(what);
    Token t = tok_;
    tok_ = lex_.next();
    return t;
  }

  Decl decl() {
    decl_.clear();
    Token kind = word("a declaration kind");
    if (std::find(kKinds.begin(), kKinds.end(), kind.text) == kKinds.end())
      throw SiteError(ErrorKind::SyntaxError, kind.loc, "", "unknown declaration kind '" + kind.text + "'");
    Token name = word("a declaration name");
    decl_ = name.text;
    Decl d{kind.text, name.text, {}, kind.loc};
    expect("{");
    while (!at("}")) {
      Token f = word("a field name or '}'");
      expect("=");
      Value v = value();
      expect(";");
      d.fields.push_back({f.text, std::move(v), f.loc});
    }
    expect("}");
    return d;
  }

  Value value() {
    const Location loc = tok_.loc;
    if (at("[")) {
      tok_ = lex_.next();
      std::vector<Value> items;
      while (!at("]")) {
        items.push_back(value());
        if (!at("]")) expect(",");
      }
      expect("]");
      return Value::make_list(std::move(items), loc);
    }
    if (at("{")) {
      tok_ = lex_.next();
      std::vector<std::pair<std::string, Value>> entries;
      while (!at("}")) {
        std::string key = atom("a dictionary key");
        expect(":");
        entries.emplace_back(std::move(key), value());
        if (!at("}")) expect(",");
      }
      expect("}");
      return Value::make_dict(std::move(entries), loc);
    }
    return Value::make_atom(atom("a value"), loc);
  }

  std::string atom(const char* what) {
    if (tok_.type != Token::Type::Word && tok_.type != Token::Type::String) fail(what);
    std::string s = tok_.text;
    tok_ = lex_.next();
    return s;
  }

  Lexer lex_;
  Token tok_;
  std::string decl_;
};

std::string print_atom(const std::string& a) {
  if (!a.empty() && std::all_of(a.begin(), a.end(), is_word_char)) return a;
  std::string out = "\"";
  for (char c : a) {
    if (c == '"' || c == '\\') out += '\\';
    out += c;
  }
  return out + "\"";
}

}  // namespace

Document parse_document(std::string_view text) { return Parser(text).document(); }

std::string print_value(const Value& v) {
  switch (v.kind) {
    case Value::Kind::Atom:
      return print_atom(v.atom);
    case Value::Kind::List: {
      std::string s = "[";
      for (std::size_t i = 0; i < v.items.size(); ++i) s += (i ? ", " : "") + print_value(v.items[i]);
      return s + "]";
    }
    case Value::Kind::Dict: {
      std::string s = "{";
      for (std::size_t i = 0; i < v.entries.size(); ++i)
        s += (i ? ", " : "") + print_atom(v.entries[i].first) + ": " + print_value(v.entries[i].second);
      return s + "}";
    }
  }
  return {};
}

std::string print_document(const Document& doc) {
  std::string out;
  for (std::size_t i = 0; i < doc.decls.size(); ++i) {
    const Decl& d = doc.decls[i];
    if (i) out += "\n";
    out += d.kind + " " + print_atom(d.name) + " {\n";
    for (const auto& f : d.fields) out += "  " + f.name + " = " + print_value(f.value) + ";\n";
    out += "}\n";
  }
  return out;
}

// ---------------------------------------------------------------------------
// Loader

class Loader {
 public:
  Loader(SiteFile& s, const LoadOptions& o) : s_(s), opt_(o) {}

  void run() {
    std::map<std::string, const Decl*> seen;
    for (const auto& d : s_.doc_.decls) {
      auto [it, fresh] = seen.emplace(d.name, &d);
      if (!fresh) fail(ErrorKind::ValidationError, d, d.loc, "name already declared at " + to_string(it->second->loc));
      kind_of_[d.name] = d.kind;
    }
    for (std::string_view kind : kKinds)
      for (const auto& d : s_.doc_.decls)
        if (d.kind == kind) load(d);
  }

 private:
  [[noreturn]] void fail(ErrorKind kind, const Decl& d, const Location& loc, const std::string& msg,
                         std::optional<Violation> v = std::nullopt) {
    throw SiteError(kind, loc, d.name, msg, std::move(v));
  }

  void allow(const Decl& d, std::initializer_list<std::string_view> names) {
    std::set<std::string> seen;
    for (const auto& f : d.fields) {
      if (std::find(names.begin(), names.end(), f.name) == names.end())
        fail(ErrorKind::ValidationError, d, f.loc, "unknown field '" + f.name + "' for a " + d.kind);
      if (!seen.insert(f.name).second) fail(ErrorKind::ValidationError, d, f.loc, "field '" + f.name + "' given twice");
    }
  }

  const Value& need(const Decl& d, std::string_view name) {
    const Field* f = d.field(name);
    if (!f) fail(ErrorKind::ValidationError, d, d.loc, "missing field '" + std::string(name) + "'");
    return f->value;
  }

  const std::string& atom(const Decl& d, const Value& v, const char* what = "an atom") {
    if (v.kind != Value::Kind::Atom) fail(ErrorKind::ValidationError, d, v.loc, std::string("expected ") + what);
    return v.atom;
  }

  const std::vector<Value>& list(const Decl& d, const Value& v) {
    if (v.kind != Value::Kind::List) fail(ErrorKind::ValidationError, d, v.loc, "expected a list");
    return v.items;
  }

  std::size_t number(const Decl& d, const Value& v) {
    const std::string& a = atom(d, v, "a number");
    if (a.empty() || !std::all_of(a.begin(), a.end(), [](char c) { return std::isdigit(static_cast<unsigned char>(c)); }) ||
        a.size() > 6)
      fail(ErrorKind::ValidationError, d, v.loc, "expected a small natural number, found '" + a + "'");
    return std::stoul(a);
  }

  bool flag(const Decl& d, std::string_view name) {
    const Field* f = d.field(name);
    if (!f) return false;
    const std::string& a = atom(d, f->value, "true or false");
    if (a != "true" && a != "false") fail(ErrorKind::ValidationError, d, f->value.loc, "expected true or false");
    return a == "true";
  }

  template <class Map>
  const typename Map::mapped_type& ref(const Decl& d, const Value& v, const Map& m, const char* kind) {
    const std::string& name = atom(d, v, "a name");
    auto it = m.find(name);
    if (it != m.end()) return it->second;
    auto k = kind_of_.find(name);
    if (k == kind_of_.end())
      fail(ErrorKind::UnresolvedReference, d, v.loc, std::string("undeclared ") + kind + " '" + name + "'");
    fail(ErrorKind::UnresolvedReference, d, v.loc, "'" + name + "' is a " + k->second + ", expected a " + kind);
  }

  std::vector<Atom> atoms(const Decl& d, const Value& v) {
    std::vector<Atom> out;
    for (const auto& item : list(d, v)) out.push_back(atom(d, item));
    return out;
  }

  // Converts module exceptions into load diagnostics at the declaration.
  template <class Fn>
  void guarded(const Decl& d, Fn fn) {
    try {
      fn();
    } catch (const SiteError&) {
      throw;
    } catch (const Error& e) {
      fail(ErrorKind::ValidationError, d, d.loc, e.what());
    }
  }

  FinMap images(const Decl& d, const Value& v, const FinSet& src, const FinSet& dst) {
    for (const auto& item : v.items) atom(d, item);
    for (const auto& [k, item] : v.entries) atom(d, item);
    if (v.kind == Value::Kind::List) return FinMap::from_images(src, dst, atoms(d, v));
    if (v.kind == Value::Kind::Dict) {
      std::vector<std::pair<Atom, Atom>> pairs;
      for (const auto& [k, item] : v.entries) pairs.emplace_back(k, item.atom);
      return FinMap::from_pairs(src, dst, pairs);
    }
    fail(ErrorKind::ValidationError, d, v.loc, "expected a list or dictionary of images");
  }

  void load(const Decl& d) {
    guarded(d, [&] {
      if (d.kind == "set") load_set(d);
      else if (d.kind == "group") load_group(d);
      else if (d.kind == "map") load_map(d);
      else if (d.kind == "action") load_action(d);
      else if (d.kind == "equivariant") load_equivariant(d);
      else if (d.kind == "bundle") load_bundle(d);
      else if (d.kind == "cover") load_cover(d);
      else if (d.kind == "stack") load_stack(d);
      else if (d.kind == "object") load_object(d);
      else if (d.kind == "datum") load_datum(d);
      else if (d.kind == "gluing") load_gluing(d);
    });
  }

  void load_set(const Decl& d) {
    allow(d, {"elements", "size"});
    if (d.field("elements") && d.field("size")) fail(ErrorKind::ValidationError, d, d.loc, "give elements or size, not both");
    if (d.field("size")) s_.sets_.emplace(d.name, FinSet::range(number(d, need(d, "size"))));
    else s_.sets_.emplace(d.name, FinSet::of(atoms(d, need(d, "elements"))));
  }

  void load_group(const Decl& d) {
    allow(d, {"elements", "carrier", "table", "cyclic"});
    Outcome<FinGroup> g = [&]() -> Outcome<FinGroup> {
      if (d.field("cyclic")) {
        if (d.field("table") || d.field("elements") || d.field("carrier"))
          fail(ErrorKind::ValidationError, d, d.loc, "a cyclic group takes no table");
        const std::size_t n = number(d, need(d, "cyclic"));
        if (n == 0) fail(ErrorKind::ValidationError, d, d.loc, "a group needs at least one element");
        return cyclic_group(n);
      }
      FinSet carrier = d.field("carrier") ? ref(d, need(d, "carrier"), s_.sets_, "set")
                                          : FinSet::of(atoms(d, need(d, "elements")));
      std::vector<std::vector<Atom>> rows;
      for (const auto& row : list(d, need(d, "table"))) rows.push_back(atoms(d, row));
      // Rows are listed in declaration order of the elements.
      if (d.field("elements")) {
        const auto declared = atoms(d, need(d, "elements"));
        std::vector<std::vector<Atom>> sorted(rows.size());
        if (rows.size() != declared.size()) fail(ErrorKind::ValidationError, d, d.loc, "table needs one row per element");
        std::vector<Index> pos;
        for (const auto& a : declared) pos.push_back(carrier.index_of(a));
        for (std::size_t r = 0; r < rows.size(); ++r) {
          if (rows[r].size() != declared.size())
            fail(ErrorKind::ValidationError, d, d.loc, "table row " + std::to_string(r) + " has the wrong length");
          sorted[pos[r]].resize(declared.size());
          for (std::size_t c = 0; c < declared.size(); ++c) sorted[pos[r]][pos[c]] = rows[r][c];
        }
        rows = std::move(sorted);
      }
      return check_group(carrier, rows);
    }();
    if (!g && !opt_.defer_group_checks)
      fail(ErrorKind::ValidationError, d, d.loc, g.violation().describe(), g.violation());
    s_.groups_.emplace(d.name, std::move(g));
  }

  void load_map(const Decl& d) {
    allow(d, {"src", "dst", "images"});
    const FinSet& src = ref(d, need(d, "src"), s_.sets_, "set");
    const FinSet& dst = ref(d, need(d, "dst"), s_.sets_, "set");
    s_.maps_.emplace(d.name, images(d, need(d, "images"), src, dst));
  }

  void load_action(const Decl& d) {
    allow(d, {"group", "space", "table", "trivial", "regular", "product"});
    const Outcome<FinGroup>& g = ref(d, need(d, "group"), s_.groups_, "group");
    const int shapes = (d.field("table") ? 1 : 0) + (flag(d, "trivial") ? 1 : 0) + (flag(d, "regular") ? 1 : 0) +
                       (d.field("product") ? 1 : 0);
    if (shapes != 1) fail(ErrorKind::ValidationError, d, d.loc, "give exactly one of table, trivial, regular, product");
    if ((flag(d, "regular") || d.field("product")) == (d.field("space") != nullptr))
      fail(ErrorKind::ValidationError, d, d.loc,
           d.field("space") ? "regular and product actions fix their own space" : "missing field 'space'");
    if (!g) {
      s_.actions_.emplace(d.name, g.violation());
      return;
    }
    const FinGroup& G = *g;
    Outcome<GAction> a = [&]() -> Outcome<GAction> {
      if (flag(d, "regular")) return regular_action(G);
      if (d.field("product")) return product_action(G, ref(d, need(d, "product"), s_.sets_, "set"));
      const FinSet& space = ref(d, need(d, "space"), s_.sets_, "set");
      if (flag(d, "trivial")) return trivial_action(G, space);
      std::vector<std::vector<Atom>> rows;
      for (const auto& row : list(d, need(d, "table"))) rows.push_back(atoms(d, row));
      return check_action(G, space, rows);
    }();
    s_.actions_.emplace(d.name, std::move(a));
  }

  void load_equivariant(const Decl& d) {
    allow(d, {"map", "src", "dst"});
    const FinMap& f = ref(d, need(d, "map"), s_.maps_, "map");
    const Outcome<GAction>& a = ref(d, need(d, "src"), s_.actions_, "action");
    const Outcome<GAction>& b = ref(d, need(d, "dst"), s_.actions_, "action");
    if (!a || !b) {
      s_.equivariants_.emplace(d.name, !a ? a.violation() : b.violation());
      return;
    }
    if (!(f.src() == a->space()) || !(f.dst() == b->space()))
      fail(ErrorKind::ValidationError, d, d.loc, "map does not run between the two acted-on sets");
    if (!(a->group() == b->group())) fail(ErrorKind::ValidationError, d, d.loc, "actions of different groups");
    s_.equivariants_.emplace(d.name, check_equivariant(f, *a, *b));
  }

  void load_bundle(const Decl& d) {
    allow(d, {"total", "proj", "cover"});
    const Outcome<GAction>& total = ref(d, need(d, "total"), s_.actions_, "action");
    const FinMap& proj = ref(d, need(d, "proj"), s_.maps_, "map");
    const CoveringFamily* cover = d.field("cover") ? &ref(d, need(d, "cover"), s_.covers_, "cover") : nullptr;
    if (!total) {
      s_.bundles_.emplace(d.name, total.violation());
      return;
    }
    if (!(proj.src() == total->space()))
      fail(ErrorKind::ValidationError, d, d.loc, "projection does not start at the total space");
    if (cover && !(cover->target == proj.dst()))
      fail(ErrorKind::ValidationError, d, d.loc, "cover is not a cover of the base");
    if (cover && !is_canonical_cover(*cover))
      fail(ErrorKind::ValidationError, d, d.loc, "trivializing cover is not in the canonical topology");
    Outcome<Bundle> b = [&]() -> Outcome<Bundle> {
      if (!cover) return is_principal_bundle(*total, proj);
      auto eq = check_equivariant(proj, *total, base_action(total->group(), proj.dst()));
      if (!eq) return eq.violation();
      return is_principal_bundle(*eq, *cover);
    }();
    s_.bundles_.emplace(d.name, std::move(b));
  }

  void load_cover(const Decl& d) {
    allow(d, {"target", "legs"});
    const FinSet& target = ref(d, need(d, "target"), s_.sets_, "set");
    std::vector<FinMap> legs;
    for (const auto& v : list(d, need(d, "legs"))) legs.push_back(ref(d, v, s_.maps_, "map"));
    s_.covers_.emplace(d.name, make_family(target, std::move(legs)));
  }

  void load_stack(const Decl& d) {
    allow(d, {"action"});
    const Outcome<GAction>& a = ref(d, need(d, "action"), s_.actions_, "action");
    if (!a) s_.stacks_.emplace(d.name, a.violation());
    else s_.stacks_.emplace(d.name, make_quotient_stack(*a));
  }

  void load_object(const Decl& d) {
    allow(d, {"stack", "bundle", "alpha"});
    const Outcome<QuotientStack>& st = ref(d, need(d, "stack"), s_.stacks_, "stack");
    const Outcome<Bundle>& b = ref(d, need(d, "bundle"), s_.bundles_, "bundle");
    const FinMap* alpha = d.field("alpha") ? &ref(d, need(d, "alpha"), s_.maps_, "map") : nullptr;
    if (!st || !b) {
      s_.objects_.emplace(d.name, !st ? st.violation() : b.violation());
      return;
    }
    if (!(st->group == b->group())) fail(ErrorKind::ValidationError, d, d.loc, "bundle for another group");
    FinMap a;
    if (alpha) {
      a = *alpha;
    } else {
      if (st->x_action.space().size() != 1)
        fail(ErrorKind::ValidationError, d, d.loc, "missing field 'alpha' (only a one-point X fixes it)");
      a = bang(b->total_space());
    }
    if (!(a.src() == b->total_space()) || !(a.dst() == st->x_action.space()))
      fail(ErrorKind::ValidationError, d, d.loc, "alpha must run from the total space to the stack's X");
    s_.objects_.emplace(d.name, check_qs_object(*b, a, st->x_action));
  }

  void load_datum(const Decl& d) {
    allow(d, {"stack", "cover", "restrict", "twist", "objects", "phi"});
    const Outcome<QuotientStack>& st = ref(d, need(d, "stack"), s_.stacks_, "stack");
    const CoveringFamily& cover = ref(d, need(d, "cover"), s_.covers_, "cover");
    s_.datum_stack_[d.name] = need(d, "stack").atom;
    const bool restricted = d.field("restrict") != nullptr;
    if (restricted == (d.field("objects") != nullptr))
      fail(ErrorKind::ValidationError, d, d.loc, "give either restrict (with optional twist) or objects with phi");
    if (restricted && d.field("phi")) fail(ErrorKind::ValidationError, d, d.loc, "phi is derived for a restricted datum");
    if (!restricted && d.field("twist")) fail(ErrorKind::ValidationError, d, d.loc, "twist applies to restricted data");
    const std::size_t n = cover.legs.size();

    std::vector<const Outcome<QSObject>*> objs;
    if (restricted) {
      objs.push_back(&ref(d, need(d, "restrict"), s_.objects_, "object"));
    } else {
      for (const auto& v : list(d, need(d, "objects"))) objs.push_back(&ref(d, v, s_.objects_, "object"));
      if (objs.size() != n) fail(ErrorKind::ValidationError, d, d.loc, "one object per leg of the cover");
    }
    if (!st) {
      s_.data_.emplace(d.name, st.violation());
      return;
    }
    for (const auto* o : objs)
      if (!*o) {
        s_.data_.emplace(d.name, o->violation());
        return;
      }

    std::vector<QSObject> objects;
    std::vector<std::vector<FinMap>> maps(n);
    if (restricted) {
      const QSObject& obj = **objs[0];
      if (!(obj.base() == cover.target)) fail(ErrorKind::ValidationError, d, d.loc, "cover of another base");
      const DescentDatum plain = restrict_to_datum(obj, cover);
      objects = plain.objects;
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) maps[i].push_back(plain.overlap_isos[i][j].map());
      if (const Field* tw = d.field("twist"))
        for (const auto& entry : list(d, tw->value)) {
          const auto& e = list(d, entry);
          if (e.size() != 3) fail(ErrorKind::ValidationError, d, entry.loc, "a twist is [i, j, group element]");
          const std::size_t i = number(d, e[0]), j = number(d, e[1]);
          if (i >= n || j >= n) fail(ErrorKind::ValidationError, d, entry.loc, "twist names a missing leg");
          const auto g = st->group.carrier().find(atom(d, e[2]));
          if (!g) fail(ErrorKind::ValidationError, d, e[2].loc, "not an element of the group");
          const GAction& act = plain.overlap_isos[i][j].dst().bundle().total();
          std::vector<Index> t(maps[i][j].table().begin(), maps[i][j].table().end());
          for (auto& v : t) v = act.apply(*g, v);
          maps[i][j] = FinMap(maps[i][j].src(), maps[i][j].dst(), std::move(t));
        }
    } else {
      for (const auto* o : objs) objects.push_back(**o);
      for (std::size_t i = 0; i < n; ++i)
        if (!(objects[i].base() == cover.legs[i].src()))
          fail(ErrorKind::ValidationError, d, d.loc, "object " + std::to_string(i) + " does not live over its leg");
      const Overlaps ov = overlaps(cover);
      std::vector<std::vector<const Value*>> given(n, std::vector<const Value*>(n, nullptr));
      for (const auto& entry : list(d, need(d, "phi"))) {
        const auto& e = list(d, entry);
        if (e.size() != 3) fail(ErrorKind::ValidationError, d, entry.loc, "a phi entry is [i, j, images]");
        const std::size_t i = number(d, e[0]), j = number(d, e[1]);
        if (i >= n || j >= n) fail(ErrorKind::ValidationError, d, entry.loc, "phi names a missing leg");
        if (given[i][j]) fail(ErrorKind::ValidationError, d, entry.loc, "phi given twice for one overlap");
        given[i][j] = &e[2];
      }
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
          if (!given[i][j])
            fail(ErrorKind::ValidationError, d, d.loc,
                 "missing phi for overlap " + std::to_string(i) + "," + std::to_string(j));
          const FinSet src = restrict(objects[i], ov.pairs[i][j].proj1).total_space();
          const FinSet dst = restrict(objects[j], ov.pairs[i][j].proj2).total_space();
          maps[i].push_back(images(d, *given[i][j], src, dst));
        }
    }
    s_.data_.emplace(d.name, make_descent_datum(*st, cover, std::move(objects), maps));
  }

  void load_gluing(const Decl& d) {
    allow(d, {"cover", "src", "dst", "locals", "from"});
    const CoveringFamily& cover = ref(d, need(d, "cover"), s_.covers_, "cover");
    const Outcome<QSObject>& x = ref(d, need(d, "src"), s_.objects_, "object");
    const Outcome<QSObject>& y = ref(d, need(d, "dst"), s_.objects_, "object");
    if ((d.field("locals") != nullptr) == (d.field("from") != nullptr))
      fail(ErrorKind::ValidationError, d, d.loc, "give either locals or from");
    const FinMap* global = d.field("from") ? &ref(d, need(d, "from"), s_.maps_, "map") : nullptr;
    if (!x || !y) {
      s_.gluings_.emplace(d.name, !x ? x.violation() : y.violation());
      return;
    }
    if (!(x->base() == cover.target) || !(y->base() == cover.target))
      fail(ErrorKind::ValidationError, d, d.loc, "cover of another base");
    GluingSpec spec{cover, *x, *y, {}};
    if (global) {
      auto m = check_qs_morphism(*x, *y, *global);
      if (!m) {
        s_.gluings_.emplace(d.name, m.violation());
        return;
      }
      for (const auto& f : cover.legs) spec.locals.push_back(restrict_morphism(*m, f).map());
    } else {
      const auto& ls = list(d, need(d, "locals"));
      if (ls.size() != cover.legs.size()) fail(ErrorKind::ValidationError, d, d.loc, "one local map per leg");
      for (std::size_t i = 0; i < ls.size(); ++i)
        spec.locals.push_back(images(d, ls[i], restrict(*x, cover.legs[i]).total_space(),
                                     restrict(*y, cover.legs[i]).total_space()));
    }
    s_.gluings_.emplace(d.name, std::move(spec));
  }

  SiteFile& s_;
  LoadOptions opt_;
  std::map<std::string, std::string> kind_of_;
};

SiteFile SiteFile::load(Document doc, const LoadOptions& options) {
  SiteFile s;
  s.doc_ = std::move(doc);
  Loader(s, options).run();
  return s;
}

SiteFile SiteFile::load_text(std::string_view text, const LoadOptions& options) {
  return load(parse_document(text), options);
}

SiteFile SiteFile::load_file(const std::string& path, const LoadOptions& options) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::InvalidInput, "cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return load_text(ss.str(), options);
}

std::vector<const Decl*> SiteFile::decls(std::string_view kind) const {
  std::vector<const Decl*> out;
  for (const auto& d : doc_.decls)
    if (d.kind == kind) out.push_back(&d);
  return out;
}

}  // namespace qstack::site
