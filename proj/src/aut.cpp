#include "desync/aut.hpp"

#include <charconv>
#include <sstream>

#include "desync/term.hpp"

namespace desync {

std::string export_aut(const Lts& lts) {
  lts.require_complete("aut export");
  if (lts.num_states == 0) throw Error("cannot export an LTS without states");
  Lts c = canonical_form(lts);
  std::size_t ticks = 0;
  for (bool t : c.terminating) ticks += t ? 1 : 0;
  std::ostringstream os;
  os << "des (0, " << c.transitions.size() + ticks << ", " << c.num_states << ")\n";
  Adjacency adj(c);
  for (StateId s = 0; s < c.num_states; ++s) {
    for (std::size_t e = adj.begin(s); e < adj.end(s); ++e)
      os << "(" << s << ",\"" << c.labels[adj.edges[e].label].text << "\"," << adj.edges[e].target << ")\n";
    if (c.terminating[s]) os << "(" << s << ",\"" << kTickLabel << "\"," << s << ")\n";
  }
  return os.str();
}

namespace {

class AutReader {
 public:
  explicit AutReader(std::string_view text) : text_(text) {}

  Lts read() {
    skip_space();
    if (!consume("des")) fail("expected 'des' header");
    skip_space();
    expect('(');
    std::size_t initial = number();
    expect(',');
    std::size_t count = number();
    expect(',');
    std::size_t states = number();
    expect(')');
    if (states == 0) fail("state count must be positive");
    if (initial >= states) fail("initial state " + std::to_string(initial) + " out of range");
    if (states > (std::size_t{1} << 31)) fail("state count too large");

    Lts lts;
    for (std::size_t i = 0; i < states; ++i) lts.add_state(false);
    lts.initial = static_cast<StateId>(initial);
    std::size_t seen = 0;
    while (true) {
      skip_space();
      if (pos_ >= text_.size()) break;
      expect('(');
      std::size_t src = number();
      expect(',');
      skip_space();
      std::string label = label_text();
      expect(',');
      std::size_t dst = number();
      expect(')');
      ++seen;
      if (src >= states || dst >= states)
        fail("transition " + std::to_string(seen) + " refers to state " + std::to_string(std::max(src, dst)) +
             " but the header declares " + std::to_string(states) + " states");
      if (label == kTickLabel) {
        if (src != dst) fail("termination marker must be a self loop");
        lts.terminating[src] = true;
        continue;
      }
      lts.add_transition(static_cast<StateId>(src), lts.intern_label(label), static_cast<StateId>(dst));
    }
    if (seen != count)
      fail("header declares " + std::to_string(count) + " transitions, found " + std::to_string(seen));
    return lts;
  }

 private:
  std::string_view text_;
  std::size_t pos_ = 0;

  [[noreturn]] void fail(const std::string& message) const {
    std::size_t line = 1;
    for (std::size_t i = 0; i < pos_ && i < text_.size(); ++i) line += text_[i] == '\n' ? 1 : 0;
    throw Error("aut line " + std::to_string(line) + ": " + message);
  }

  void skip_space() {
    while (pos_ < text_.size() && (text_[pos_] == ' ' || text_[pos_] == '\t' || text_[pos_] == '\n' || text_[pos_] == '\r'))
      ++pos_;
  }

  bool consume(std::string_view word) {
    if (text_.substr(pos_, word.size()) != word) return false;
    pos_ += word.size();
    return true;
  }

  void expect(char c) {
    skip_space();
    if (pos_ >= text_.size() || text_[pos_] != c) fail(std::string("expected '") + c + "'");
    ++pos_;
  }

  std::size_t number() {
    skip_space();
    std::size_t value = 0;
    auto [ptr, ec] = std::from_chars(text_.data() + pos_, text_.data() + text_.size(), value);
    if (ec != std::errc()) fail("expected a number");
    pos_ = static_cast<std::size_t>(ptr - text_.data());
    return value;
  }

  std::string label_text() {
    if (pos_ < text_.size() && text_[pos_] == '"') {
      std::size_t close = text_.find('"', pos_ + 1);
      if (close == std::string_view::npos) fail("unterminated label");
      std::string out(text_.substr(pos_ + 1, close - pos_ - 1));
      pos_ = close + 1;
      return out;
    }
    // Unquoted: everything up to the last comma before the closing parenthesis.
    std::size_t end = text_.find(')', pos_);
    if (end == std::string_view::npos) fail("unterminated transition");
    std::size_t comma = text_.rfind(',', end);
    if (comma == std::string_view::npos || comma < pos_) fail("expected ',' after label");
    std::string out(text_.substr(pos_, comma - pos_));
    while (!out.empty() && (out.back() == ' ' || out.back() == '\t')) out.pop_back();
    pos_ = comma;
    if (out.empty()) fail("empty label");
    return out;
  }
};

}  // namespace

Lts import_aut(std::string_view text) { return AutReader(text).read(); }

}  // namespace desync
