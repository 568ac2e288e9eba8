#include "solitonlab/descriptor.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <map>
#include <sstream>
#include <vector>

namespace solitonlab {

namespace {

std::string trim(const std::string& s) {
  size_t b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  size_t e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

struct Line {
  int number = 0;
  std::string key, value;
};

struct Section {
  int number = 0;  // line of the header
  std::vector<Line> lines;

  const Line* find(const std::string& key) const {
    for (const Line& l : lines)
      if (l.key == key) return &l;
    return nullptr;
  }
};

struct Document {
  std::string source;
  std::map<std::string, Section> sections;
  std::vector<std::string> order;

  [[noreturn]] void fail(int line, const std::string& msg) const {
    throw DescriptorError(source, line, msg);
  }

  const Section& require(const std::string& name) const {
    auto it = sections.find(name);
    if (it == sections.end())
      fail(1, "missing required section [" + name + "]");
    return it->second;
  }

  const std::string& require_key(const Section& sec,
                                 const std::string& key) const {
    const Line* l = sec.find(key);
    if (!l) fail(sec.number, "missing required key '" + key + "'");
    return l->value;
  }
};

Document tokenize(const std::string& text, const std::string& source) {
  Document doc;
  doc.source = source;
  std::istringstream in(text);
  std::string raw;
  int number = 0;
  Section* current = nullptr;
  while (std::getline(in, raw)) {
    ++number;
    size_t hash = raw.find('#');
    if (hash != std::string::npos) raw.erase(hash);
    std::string line = trim(raw);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']')
        doc.fail(number, "unterminated section header");
      std::string name = trim(line.substr(1, line.size() - 2));
      if (name.empty()) doc.fail(number, "empty section name");
      if (doc.sections.count(name))
        doc.fail(number, "duplicate section [" + name + "]");
      current = &doc.sections[name];
      current->number = number;
      doc.order.push_back(name);
      continue;
    }
    size_t eq = line.find('=');
    if (eq == std::string::npos)
      doc.fail(number, "expected 'key = value' or a [section] header");
    if (!current) doc.fail(number, "key/value line before any [section]");
    Line entry;
    entry.number = number;
    entry.key = trim(line.substr(0, eq));
    entry.value = trim(line.substr(eq + 1));
    if (entry.key.empty()) doc.fail(number, "empty key");
    if (current->find(entry.key))
      doc.fail(number, "duplicate key '" + entry.key + "'");
    current->lines.push_back(std::move(entry));
  }
  return doc;
}

std::vector<std::string> split_list(const std::string& value) {
  std::vector<std::string> out;
  std::stringstream ss(value);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    tok = trim(tok);
    if (!tok.empty()) out.push_back(tok);
  }
  return out;
}

double parse_number(const Document& doc, const Line& l,
                    const std::string& text) {
  try {
    size_t used = 0;
    double v = std::stod(text, &used);
    if (used != text.size())
      doc.fail(l.number, "trailing characters after number '" + text + "'");
    return v;
  } catch (const std::logic_error&) {
    doc.fail(l.number, "expected a number, got '" + text + "'");
  }
}

bool parse_bool(const Document& doc, const Line& l) {
  if (l.value == "true") return true;
  if (l.value == "false") return false;
  doc.fail(l.number, "expected 'true' or 'false', got '" + l.value + "'");
}

ExprPtr parse_expression(const Document& doc, const Line& l,
                         const std::vector<std::string>& vars) {
  ParseResult r = parse_expr(l.value, vars);
  if (!r.ok()) {
    const ExprError& e = *r.error;
    doc.fail(l.number, "expression error at columns " +
                           std::to_string(e.begin + 1) + "-" +
                           std::to_string(e.end + 1) + ": " + e.message);
  }
  return r.expr;
}

int coord_index(const Document& doc, const Line& l,
                const std::vector<std::string>& coords,
                const std::string& name) {
  auto it = std::find(coords.begin(), coords.end(), name);
  if (it == coords.end())
    doc.fail(l.number, "unknown coordinate '" + name + "'");
  return static_cast<int>(it - coords.begin());
}

/// Splits a key of the form head(a) or head(a,b); returns the arguments.
std::vector<std::string> key_args(const Document& doc, const Line& l,
                                  const std::string& head) {
  const std::string& k = l.key;
  if (k.size() < head.size() + 2 || k.compare(0, head.size(), head) != 0 ||
      k[head.size()] != '(' || k.back() != ')')
    doc.fail(l.number, "expected a key of the form " + head + "(...), got '" +
                           k + "'");
  std::vector<std::string> args =
      split_list(k.substr(head.size() + 1, k.size() - head.size() - 2));
  if (args.empty()) doc.fail(l.number, "empty argument list in '" + k + "'");
  return args;
}

std::vector<std::vector<ExprPtr>> parse_metric_grid(
    const Document& doc, const Section& sec,
    const std::vector<std::string>& coords,
    const std::vector<std::string>& expr_vars) {
  int n = static_cast<int>(coords.size());
  std::vector<std::vector<ExprPtr>> grid(
      static_cast<size_t>(n), std::vector<ExprPtr>(static_cast<size_t>(n)));
  bool any = false;
  for (const Line& l : sec.lines) {
    if (l.key == "f") continue;  // warped section carries f alongside
    std::vector<std::string> args = key_args(doc, l, "g");
    if (args.size() != 2)
      doc.fail(l.number, "metric keys take two coordinates: g(a,b)");
    int i = coord_index(doc, l, coords, args[0]);
    int j = coord_index(doc, l, coords, args[1]);
    ExprPtr e = parse_expression(doc, l, expr_vars);
    grid[static_cast<size_t>(i)][static_cast<size_t>(j)] = e;
    grid[static_cast<size_t>(j)][static_cast<size_t>(i)] = e;
    any = true;
  }
  if (!any) doc.fail(sec.number, "no metric components given");
  return grid;
}

}  // namespace

CatalogEntry parse_descriptor(const std::string& text,
                              const std::string& source_name) {
  Document doc = tokenize(text, source_name);
  const Section& manifold = doc.require("manifold");

  CatalogEntry entry;
  entry.name = doc.require_key(manifold, "name");
  std::string kind = doc.require_key(manifold, "kind");
  entry.coord_names = split_list(doc.require_key(manifold, "coords"));
  if (entry.coord_names.empty())
    doc.fail(manifold.find("coords")->number, "coords list is empty");
  entry.dim = static_cast<int>(entry.coord_names.size());

  const Section& chart = doc.require("chart");
  for (const std::string& name : entry.coord_names) {
    const Line* l = chart.find(name);
    if (!l) doc.fail(chart.number, "no chart range for coordinate '" + name + "'");
    std::vector<std::string> parts = split_list(l->value);
    if (parts.size() != 2)
      doc.fail(l->number, "chart ranges are 'name = lo, hi'");
    double lo = parse_number(doc, *l, parts[0]);
    double hi = parse_number(doc, *l, parts[1]);
    if (!(lo < hi)) doc.fail(l->number, "empty chart range");
    entry.box.ranges.push_back({lo, hi});
  }
  for (const Line& l : chart.lines)
    if (std::find(entry.coord_names.begin(), entry.coord_names.end(), l.key) ==
        entry.coord_names.end())
      doc.fail(l.number, "'" + l.key + "' is not a declared coordinate");

  if (const Line* l = manifold.find("margin")) {
    entry.margin = parse_number(doc, *l, l->value);
    if (!(entry.margin >= 0.0 && entry.margin < 0.5))
      doc.fail(l->number, "margin must lie in [0, 0.5)");
  }
  if (const Line* l = manifold.find("lambda"))
    entry.expected.lambda = parse_number(doc, *l, l->value);

  if (kind == "metric") {
    entry.kind = EntryKind::IntrinsicMetric;
    const Section& sec = doc.require("metric");
    entry.metric = std::make_shared<ExprMetric>(
        entry.dim,
        parse_metric_grid(doc, sec, entry.coord_names, entry.coord_names));
    if (const Line* l = manifold.find("concurrent"))
      entry.expected.concurrent_potential = parse_bool(doc, *l);
  } else if (kind == "immersion") {
    entry.kind = EntryKind::EuclideanImmersion;
    const Section& sec = doc.require("immersion");
    const Line* ml = sec.find("ambient_dim");
    if (!ml) doc.fail(sec.number, "missing required key 'ambient_dim'");
    int m = static_cast<int>(parse_number(doc, *ml, ml->value));
    if (m < entry.dim)
      doc.fail(ml->number, "ambient dimension below chart dimension");
    std::vector<ExprPtr> comps;
    for (int a = 1; a <= m; ++a) {
      const Line* l = sec.find("y" + std::to_string(a));
      if (!l)
        doc.fail(sec.number, "missing immersion component y" + std::to_string(a));
      comps.push_back(parse_expression(doc, *l, entry.coord_names));
    }
    entry.immersion = Immersion(entry.dim, m, std::move(comps));
    if (const Line* l = sec.find("origin")) {
      std::vector<std::string> parts = split_list(l->value);
      if (static_cast<int>(parts.size()) != m)
        doc.fail(l->number, "origin needs one entry per ambient coordinate");
      for (int a = 0; a < m; ++a)
        entry.immersion->origin[a] = parse_number(doc, *l, parts[static_cast<size_t>(a)]);
    }
    entry.expected.concurrent_potential = true;
  } else if (kind == "warped") {
    entry.kind = EntryKind::WarpedProduct;
    if (entry.dim < 2)
      doc.fail(manifold.number, "a warped product needs at least two coordinates");
    const Section& sec = doc.require("warped");
    const Line* fl = sec.find("f");
    if (!fl) doc.fail(sec.number, "missing warping function 'f'");
    ExprPtr f = parse_expression(doc, *fl, {entry.coord_names[0]});

    CatalogEntry fiber;
    fiber.kind = EntryKind::IntrinsicMetric;
    fiber.dim = entry.dim - 1;
    fiber.coord_names.assign(entry.coord_names.begin() + 1,
                             entry.coord_names.end());
    fiber.box.ranges.assign(entry.box.ranges.begin() + 1,
                            entry.box.ranges.end());
    fiber.metric = std::make_shared<ExprMetric>(
        fiber.dim,
        parse_metric_grid(doc, sec, fiber.coord_names, fiber.coord_names));

    std::string name = entry.name;
    ChartBox box = entry.box;
    std::optional<double> lambda = entry.expected.lambda;
    double margin = entry.margin;
    std::vector<std::string> coord_names = entry.coord_names;
    try {
      entry = make_warped_product(f, fiber, box.ranges[0]);
    } catch (const std::invalid_argument& e) {
      doc.fail(sec.number, e.what());
    }
    entry.name = name;
    entry.coord_names = coord_names;
    entry.margin = margin;
    if (entry.warped) entry.warped->margin = margin;
    if (lambda) entry.expected.lambda = lambda;
  } else {
    doc.fail(manifold.find("kind")->number,
             "kind must be 'metric', 'immersion' or 'warped'");
  }

  if (auto it = doc.sections.find("potential"); it != doc.sections.end()) {
    if (entry.kind == EntryKind::EuclideanImmersion)
      doc.fail(it->second.number,
               "immersions use the tangential position field; no [potential]");
    entry.potential_exprs.assign(static_cast<size_t>(entry.dim), ex::c(0.0));
    for (const Line& l : it->second.lines) {
      std::vector<std::string> args = key_args(doc, l, "v");
      if (args.size() != 1)
        doc.fail(l.number, "potential keys take one coordinate: v(name)");
      int i = coord_index(doc, l, entry.coord_names, args[0]);
      entry.potential_exprs[static_cast<size_t>(i)] =
          parse_expression(doc, l, entry.coord_names);
    }
  } else if (entry.kind == EntryKind::IntrinsicMetric &&
             entry.potential_exprs.empty()) {
    entry.potential_exprs.assign(static_cast<size_t>(entry.dim), ex::c(0.0));
  }

  for (const std::string& name : doc.order)
    if (name != "manifold" && name != "chart" && name != "metric" &&
        name != "immersion" && name != "warped" && name != "potential")
      doc.fail(doc.sections.at(name).number, "unknown section [" + name + "]");

  return entry;
}

CatalogEntry load_descriptor_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DescriptorError(path, 0, "cannot open file");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_descriptor(ss.str(), path);
}

}  // namespace solitonlab
