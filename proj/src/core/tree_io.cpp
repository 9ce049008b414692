#include "spinekit/core/tree_io.hpp"

#include <array>
#include <charconv>
#include <istream>
#include <ostream>
#include <sstream>
#include <string_view>

#include "spinekit/core/errors.hpp"

namespace spinekit::core {

std::string format_real(double value) {
  if (value == kInfinity) {
    return "inf";
  }
  std::array<char, 64> buf{};
  auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), value);
  if (ec != std::errc{}) {
    throw Error("cannot format real");
  }
  return std::string(buf.data(), ptr);
}

double parse_real(std::string_view text) {
  if (text == "inf") {
    return kInfinity;
  }
  double value = 0.0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc{} || ptr != text.data() + text.size()) {
    throw StructuralError("malformed real: '" + std::string(text) + "'");
  }
  return value;
}

namespace {

void write_record(std::ostream& os, const ParticleRecord& r) {
  os << r.label.to_string() << ' ' << format_real(r.birth) << ' ' << format_real(r.death) << ' ';
  if (r.child_count) {
    os << *r.child_count;
  } else {
    os << '-';
  }
  for (const auto& k : r.path) {
    os << ' ' << format_real(k.time) << ':' << format_real(k.position);
    if (k.absorbed) {
      os << '!';
    }
  }
}

ParticleRecord read_record(std::istringstream& in) {
  ParticleRecord r;
  std::string label, birth, death, count;
  if (!(in >> label >> birth >> death >> count)) {
    throw StructuralError("truncated particle line");
  }
  r.label = ParticleLabel::parse(label);
  r.birth = parse_real(birth);
  r.death = parse_real(death);
  if (count != "-") {
    std::uint32_t a = 0;
    auto [ptr, ec] = std::from_chars(count.data(), count.data() + count.size(), a);
    if (ec != std::errc{} || ptr != count.data() + count.size()) {
      throw StructuralError("malformed child count: '" + count + "'");
    }
    r.child_count = a;
  }
  std::string token;
  while (in >> token) {
    PathKnot k;
    if (!token.empty() && token.back() == '!') {
      k.absorbed = true;
      token.pop_back();
    }
    const auto colon = token.find(':');
    if (colon == std::string::npos) {
      throw StructuralError("malformed path sample: '" + token + "'");
    }
    k.time = parse_real(std::string_view(token).substr(0, colon));
    k.position = parse_real(std::string_view(token).substr(colon + 1));
    r.path.push_back(k);
  }
  return r;
}

bool next_content_line(std::istream& is, std::string& line) {
  while (std::getline(is, line)) {
    if (!line.empty() && line.front() != '#') {
      return true;
    }
  }
  return false;
}

void expect_header(std::istream& is, std::string_view header) {
  std::string line;
  if (!next_content_line(is, line) || line != std::string(header) + " 1") {
    throw StructuralError("expected header '" + std::string(header) + " 1'");
  }
}

}  // namespace

void write_tree(std::ostream& os, const MarkedTree& tree) {
  os << "spinekit-tree 1\n";
  os << "horizon " << format_real(tree.horizon()) << " origin " << format_real(tree.origin()) << '\n';
  for (const auto& r : tree.records()) {
    write_record(os, r);
    os << '\n';
  }
}

MarkedTree read_tree(std::istream& is) {
  expect_header(is, "spinekit-tree");
  std::string line;
  if (!next_content_line(is, line)) {
    throw StructuralError("missing horizon line");
  }
  std::istringstream head(line);
  std::string kw1, h, kw2, x;
  if (!(head >> kw1 >> h >> kw2 >> x) || kw1 != "horizon" || kw2 != "origin") {
    throw StructuralError("malformed horizon line");
  }
  std::vector<ParticleRecord> records;
  while (next_content_line(is, line)) {
    std::istringstream in(line);
    records.push_back(read_record(in));
  }
  return MarkedTree(std::move(records), parse_real(h), parse_real(x));
}

void write_skeleton(std::ostream& os, const SkeletonRealization& skeleton) {
  os << "spinekit-skeleton 1\n";
  os << "time " << format_real(skeleton.time()) << " marks";
  for (const auto& u : skeleton.mark_nodes()) {
    os << ' ' << u.to_string();
  }
  os << '\n';
  for (std::size_t i = 0; i < skeleton.k(); ++i) {
    for (std::size_t j = i + 1; j < skeleton.k(); ++j) {
      os << "# split " << i + 1 << ' ' << j + 1 << ' ' << format_real(skeleton.split_time(i, j))
         << '\n';
    }
  }
  for (const auto& n : skeleton.nodes()) {
    os << n.marks << ' ';
    write_record(os, n.record);
    os << '\n';
  }
}

SkeletonRealization read_skeleton(std::istream& is) {
  expect_header(is, "spinekit-skeleton");
  std::string line;
  if (!next_content_line(is, line)) {
    throw StructuralError("missing time line");
  }
  std::istringstream head(line);
  std::string kw, t, kw2;
  if (!(head >> kw >> t >> kw2) || kw != "time" || kw2 != "marks") {
    throw StructuralError("malformed skeleton time line");
  }
  std::vector<ParticleLabel> marks;
  std::string token;
  while (head >> token) {
    marks.push_back(ParticleLabel::parse(token));
  }
  std::vector<SkeletonNode> nodes;
  while (next_content_line(is, line)) {
    std::istringstream in(line);
    std::uint32_t d = 0;
    if (!(in >> d)) {
      throw StructuralError("malformed skeleton node line");
    }
    nodes.push_back(SkeletonNode{read_record(in), d});
  }
  return SkeletonRealization(std::move(nodes), std::move(marks), parse_real(t));
}

}  // namespace spinekit::core
