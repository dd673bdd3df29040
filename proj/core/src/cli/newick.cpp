#include "wscj/cli/newick.hpp"

#include <cctype>
#include <charconv>
#include <fstream>
#include <functional>
#include <set>
#include <sstream>

#include "wscj/core/errors.hpp"

namespace wscj::cli {

namespace {

class NewickParser {
 public:
  explicit NewickParser(std::string_view text) : s_(text) {}

  Tree parse() {
    skip();
    subtree();
    skip();
    if (peek() == ':') {
      ++pos_;
      length();
      skip();
    }
    expect(';');
    skip();
    if (pos_ != s_.size()) fail("unexpected text after ';'");
    name_unnamed();
    return Tree(std::move(nodes_));
  }

 private:
  [[noreturn]] void fail(const std::string& what) const {
    throw InputError("newick: position " + std::to_string(pos_) + ": " + what);
  }

  char peek() const { return pos_ < s_.size() ? s_[pos_] : '\0'; }

  void skip() {
    while (pos_ < s_.size()) {
      if (std::isspace(static_cast<unsigned char>(s_[pos_]))) {
        ++pos_;
      } else if (s_[pos_] == '[') {
        const auto close = s_.find(']', pos_);
        if (close == std::string_view::npos) fail("unterminated comment");
        pos_ = close + 1;
      } else {
        break;
      }
    }
  }

  void expect(char c) {
    if (peek() != c) fail(std::string("expected '") + c + "'");
    ++pos_;
  }

  std::string label() {
    skip();
    std::string out;
    if (peek() == '\'') {
      ++pos_;
      while (true) {
        if (pos_ >= s_.size()) fail("unterminated quoted name");
        if (s_[pos_] == '\'') {
          if (pos_ + 1 < s_.size() && s_[pos_ + 1] == '\'') {
            out.push_back('\'');
            pos_ += 2;
            continue;
          }
          ++pos_;
          break;
        }
        out.push_back(s_[pos_++]);
      }
      return out;
    }
    while (pos_ < s_.size()) {
      const char c = s_[pos_];
      if (std::isspace(static_cast<unsigned char>(c)) || c == '(' || c == ')' || c == ',' || c == ':' ||
          c == ';' || c == '[' || c == '\'') {
        break;
      }
      out.push_back(c);
      ++pos_;
    }
    return out;
  }

  double length() {
    skip();
    const auto start = pos_;
    while (pos_ < s_.size() && (std::isdigit(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '.' ||
                                s_[pos_] == 'e' || s_[pos_] == 'E' || s_[pos_] == '-' || s_[pos_] == '+')) {
      ++pos_;
    }
    double value = 0.0;
    const auto [ptr, ec] = std::from_chars(s_.data() + start, s_.data() + pos_, value);
    if (start == pos_ || ec != std::errc() || ptr != s_.data() + pos_) {
      pos_ = start;
      fail("malformed branch length");
    }
    return value;
  }

  NodeId subtree() {
    skip();
    std::vector<NodeId> kids;
    const auto start = pos_;
    if (peek() == '(') {
      ++pos_;
      while (true) {
        const NodeId child = subtree();
        skip();
        if (peek() == ':') {
          ++pos_;
          nodes_[static_cast<std::size_t>(child)].branch_length = length();
          skip();
        }
        kids.push_back(child);
        if (peek() == ',') {
          ++pos_;
          continue;
        }
        expect(')');
        break;
      }
    }
    std::string name = label();
    if (kids.empty() && name.empty()) {
      pos_ = start;
      fail("leaf without a name");
    }
    if (!name.empty() && !used_.insert(name).second) fail("duplicate node name '" + name + "'");
    const auto id = static_cast<NodeId>(nodes_.size());
    nodes_.push_back(TreeNode{name, kNoNode, kids, 0.0});
    for (NodeId k : kids) nodes_[static_cast<std::size_t>(k)].parent = id;
    return id;
  }

  // Ids are already in post-order.
  void name_unnamed() {
    int counter = 0;
    for (auto& n : nodes_) {
      if (!n.name.empty()) continue;
      std::string candidate;
      do {
        candidate = "anc" + std::to_string(++counter);
      } while (used_.count(candidate));
      used_.insert(candidate);
      n.name = candidate;
    }
  }

  std::string_view s_;
  std::size_t pos_ = 0;
  std::vector<TreeNode> nodes_;
  std::set<std::string> used_;
};

std::string quote_if_needed(const std::string& name) {
  bool plain = !name.empty();
  for (char c : name) {
    if (std::isspace(static_cast<unsigned char>(c)) || std::string_view("():,;[]'").find(c) != std::string_view::npos) {
      plain = false;
    }
  }
  if (plain) return name;
  std::string out = "'";
  for (char c : name) {
    if (c == '\'') out.push_back('\'');
    out.push_back(c);
  }
  return out + "'";
}

std::string format_length(double x) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), x);
  return std::string(buf, ptr);
}

}  // namespace

Tree parse_newick(std::string_view text) { return NewickParser(text).parse(); }

Tree load_tree(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open tree file " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  try {
    return parse_newick(buf.str());
  } catch (const InputError& e) {
    throw InputError(path.string() + ": " + e.what());
  }
}

std::string write_newick(const Tree& tree) {
  std::string out;
  std::function<void(NodeId)> emit = [&](NodeId v) {
    const auto& kids = tree.children(v);
    if (!kids.empty()) {
      out.push_back('(');
      for (std::size_t i = 0; i < kids.size(); ++i) {
        if (i) out.push_back(',');
        emit(kids[i]);
      }
      out.push_back(')');
    }
    out += quote_if_needed(tree.name(v));
    if (v != tree.root()) out += ":" + format_length(tree.node(v).branch_length);
  };
  emit(tree.root());
  return out + ";";
}

}  // namespace wscj::cli
