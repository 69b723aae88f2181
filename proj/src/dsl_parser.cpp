#include <algorithm>
#include <cctype>
#include <charconv>
#include <map>
#include <set>

#include "desync/dsl.hpp"

namespace desync {

ParseError::ParseError(std::size_t line, std::size_t column, const std::string& message)
    : Error(std::to_string(line) + ":" + std::to_string(column) + ": " + message),
      line_(line),
      column_(column),
      message_(message) {}

LoopConfig ConfigDefaults::apply(LoopConfig base) const {
  if (method) base.method = *method;
  if (buffer) base.buffer.discipline = *buffer;
  if (capacity) base.buffer.capacity = *capacity;
  if (state_cap) base.state_cap = *state_cap;
  return base;
}

Term SpecFile::plant_term() const {
  std::vector<Term> parts;
  for (const auto& p : plants) parts.push_back(Term::var(p));
  return Term::par(std::move(parts));
}

Term SpecFile::supervisor_term() const {
  if (!supervisor) throw Error("specification declares no supervisor");
  return Term::var(*supervisor);
}

Term SpecFile::requirement_term() const {
  if (!requirement) throw Error("specification declares no requirement");
  return Term::var(*requirement);
}

namespace {

enum class Tok : std::uint8_t {
  ident,   // also numbers; may end in a quote
  semi,
  comma,
  equals,
  plus,
  dot,
  lparen,
  rparen,
  lbrace,
  rbrace,
  colon,
  query,
  bang,
  comm,   // ?!
  arrow,  // ->
  end,
};

const char* describe(Tok t) {
  switch (t) {
    case Tok::ident: return "identifier";
    case Tok::semi: return "';'";
    case Tok::comma: return "','";
    case Tok::equals: return "'='";
    case Tok::plus: return "'+'";
    case Tok::dot: return "'.'";
    case Tok::lparen: return "'('";
    case Tok::rparen: return "')'";
    case Tok::lbrace: return "'{'";
    case Tok::rbrace: return "'}'";
    case Tok::colon: return "':'";
    case Tok::query: return "'?'";
    case Tok::bang: return "'!'";
    case Tok::comm: return "'?!'";
    case Tok::arrow: return "'->'";
    case Tok::end: return "end of input";
  }
  return "?";
}

struct Token {
  Tok kind = Tok::end;
  std::string text;
  std::size_t line = 1;
  std::size_t column = 1;
};

bool ident_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) != 0 || c == '_'; }

std::vector<Token> lex(std::string_view src) {
  std::vector<Token> out;
  std::size_t line = 1, col = 1, i = 0;
  auto advance = [&](std::size_t n) {
    for (std::size_t k = 0; k < n; ++k, ++i) {
      if (src[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
  };
  while (i < src.size()) {
    char c = src[i];
    if (c == '#') {
      while (i < src.size() && src[i] != '\n') advance(1);
      continue;
    }
    if (std::isspace(static_cast<unsigned char>(c)) != 0) {
      advance(1);
      continue;
    }
    Token t;
    t.line = line;
    t.column = col;
    if (ident_char(c)) {
      std::size_t j = i;
      while (j < src.size() && ident_char(src[j])) ++j;
      if (j < src.size() && src[j] == '\'') ++j;
      t.kind = Tok::ident;
      t.text = std::string(src.substr(i, j - i));
      advance(j - i);
      out.push_back(std::move(t));
      continue;
    }
    std::size_t len = 1;
    switch (c) {
      case ';': t.kind = Tok::semi; break;
      case ',': t.kind = Tok::comma; break;
      case '=': t.kind = Tok::equals; break;
      case '+': t.kind = Tok::plus; break;
      case '.': t.kind = Tok::dot; break;
      case '(': t.kind = Tok::lparen; break;
      case ')': t.kind = Tok::rparen; break;
      case '{': t.kind = Tok::lbrace; break;
      case '}': t.kind = Tok::rbrace; break;
      case ':': t.kind = Tok::colon; break;
      case '!': t.kind = Tok::bang; break;
      case '?':
        if (i + 1 < src.size() && src[i + 1] == '!') {
          t.kind = Tok::comm;
          len = 2;
        } else {
          t.kind = Tok::query;
        }
        break;
      case '-':
        if (i + 1 < src.size() && src[i + 1] == '>') {
          t.kind = Tok::arrow;
          len = 2;
          break;
        }
        [[fallthrough]];
      default: {
        std::string shown = std::isprint(static_cast<unsigned char>(c)) != 0 ? std::string(1, c)
                                                                           : "\\x" + std::to_string(int(static_cast<unsigned char>(c)));
        throw ParseError(line, col, "unexpected character '" + shown + "'");
      }
    }
    t.text = std::string(src.substr(i, len));
    advance(len);
    out.push_back(std::move(t));
  }
  Token eof;
  eof.line = line;
  eof.column = col;
  out.push_back(eof);
  return out;
}

const std::set<std::string, std::less<>> kKeywords = {
    "data", "chan", "proc", "plant", "supervisor", "requirement", "config",
    "delta", "epsilon", "par", "encap", "hide", "rename", "tau"};

constexpr std::size_t kMaxDepth = 512;

class Parser {
 public:
  explicit Parser(std::string_view text) : tokens_(lex(text)) {}

  SpecFile run() {
    while (peek().kind != Tok::end) declaration();
    finish();
    return std::move(file_);
  }

 private:
  struct VarUse {
    std::string name;
    std::size_t line, column;
  };

  std::vector<Token> tokens_;
  std::size_t pos_ = 0;
  SpecFile file_;
  std::vector<VarUse> uses_;
  std::map<std::string, Token> proc_tokens_;
  std::vector<std::pair<std::string, Token>> role_refs_;
  std::size_t depth_ = 0;

  const Token& peek(std::size_t ahead = 0) const { return tokens_[std::min(pos_ + ahead, tokens_.size() - 1)]; }
  const Token& next() {
    const Token& t = tokens_[pos_];
    if (pos_ + 1 < tokens_.size()) ++pos_;
    return t;
  }
  bool accept(Tok k) {
    if (peek().kind != k) return false;
    next();
    return true;
  }
  [[noreturn]] void fail(const Token& at, const std::string& message) const {
    throw ParseError(at.line, at.column, message);
  }
  const Token& expect(Tok k, const char* context) {
    if (peek().kind != k)
      fail(peek(), std::string("expected ") + describe(k) + " " + context + ", found " + found(peek()));
    return next();
  }
  static std::string found(const Token& t) {
    return t.kind == Tok::end ? "end of input" : "'" + t.text + "'";
  }
  const Token& name(const char* what) {
    const Token& t = expect(Tok::ident, what);
    if (kKeywords.count(t.text) != 0) fail(t, "'" + t.text + "' is a keyword");
    return t;
  }
  const Token& plain_name(const char* what) {
    const Token& t = name(what);
    if (t.text.back() == '\'') fail(t, "'" + t.text + "' may not end in a quote");
    return t;
  }

  Signature& sig() { return file_.spec.signature(); }

  void declaration() {
    const Token& kw = expect(Tok::ident, "at start of declaration");
    if (kw.text == "data") {
      do {
        const Token& d = plain_name("in data declaration");
        if (sig().find_datum(d.text)) fail(d, "duplicate datum '" + d.text + "'");
        sig().add_datum(d.text);
      } while (accept(Tok::comma));
    } else if (kw.text == "chan") {
      std::vector<Token> names;
      do names.push_back(plain_name("in channel declaration"));
      while (accept(Tok::comma));
      std::vector<DatumId> data;
      if (accept(Tok::colon)) {
        do {
          const Token& d = name("in channel data list");
          auto id = sig().find_datum(d.text);
          if (!id) fail(d, "undefined datum '" + d.text + "'");
          if (std::find(data.begin(), data.end(), *id) != data.end()) fail(d, "datum '" + d.text + "' listed twice");
          data.push_back(*id);
        } while (accept(Tok::comma));
      }
      for (const auto& n : names) {
        if (sig().find_channel(n.text)) fail(n, "duplicate channel '" + n.text + "'");
        if (sig().num_base_channels() >= Signature::kMaxChannels) fail(n, "too many channels");
        sig().add_channel(n.text, data);
      }
    } else if (kw.text == "proc") {
      const Token& x = plain_name("after 'proc'");
      if (file_.spec.find(x.text)) fail(x, "duplicate definition of '" + x.text + "'");
      expect(Tok::equals, "after process name");
      Term body = term();
      file_.spec.define(x.text, std::move(body));
      proc_tokens_.emplace(x.text, x);
    } else if (kw.text == "plant") {
      do {
        const Token& p = plain_name("in plant declaration");
        if (std::find(file_.plants.begin(), file_.plants.end(), p.text) != file_.plants.end())
          fail(p, "plant '" + p.text + "' declared twice");
        file_.plants.push_back(p.text);
        role_refs_.emplace_back(p.text, p);
      } while (accept(Tok::comma));
    } else if (kw.text == "supervisor" || kw.text == "requirement") {
      auto& slot = kw.text == "supervisor" ? file_.supervisor : file_.requirement;
      const Token& p = plain_name("in role declaration");
      if (slot) fail(kw, "at most one " + kw.text + " may be declared");
      slot = p.text;
      role_refs_.emplace_back(p.text, p);
    } else if (kw.text == "config") {
      do setting();
      while (accept(Tok::comma));
    } else {
      fail(kw, "unknown declaration '" + kw.text + "'");
    }
    expect(Tok::semi, "at end of declaration");
  }

  std::size_t number(const Token& t) {
    std::size_t value = 0;
    auto [ptr, ec] = std::from_chars(t.text.data(), t.text.data() + t.text.size(), value);
    if (ec != std::errc() || ptr != t.text.data() + t.text.size()) fail(t, "expected a number, found '" + t.text + "'");
    return value;
  }

  void setting() {
    const Token& key = expect(Tok::ident, "in config");
    expect(Tok::equals, "after config key");
    const Token& value = expect(Tok::ident, "as config value");
    auto& cfg = file_.config;
    if (key.text == "method") {
      if (cfg.method) fail(key, "method set twice");
      cfg.method = parse_method(value.text);
      if (!cfg.method) fail(value, "unknown method '" + value.text + "'");
    } else if (key.text == "buffer") {
      if (cfg.buffer) fail(key, "buffer set twice");
      cfg.buffer = parse_buffer_discipline(value.text);
      if (!cfg.buffer) fail(value, "unknown buffer '" + value.text + "'");
    } else if (key.text == "capacity") {
      if (cfg.capacity) fail(key, "capacity set twice");
      if (value.text == "unbounded") {
        cfg.capacity = std::optional<std::size_t>{};
      } else {
        std::size_t n = number(value);
        if (n == 0) fail(value, "capacity must be positive");
        cfg.capacity = std::optional<std::size_t>{n};
      }
    } else if (key.text == "cap") {
      if (cfg.state_cap) fail(key, "cap set twice");
      std::size_t n = number(value);
      if (n == 0) fail(value, "cap must be positive");
      cfg.state_cap = n;
    } else {
      fail(key, "unknown config key '" + key.text + "'");
    }
  }

  struct DepthGuard {
    Parser& p;
    explicit DepthGuard(Parser& parser) : p(parser) {
      if (++p.depth_ > kMaxDepth) p.fail(p.peek(), "term nested too deeply");
    }
    ~DepthGuard() { --p.depth_; }
  };

  Term term() {
    DepthGuard guard(*this);
    std::vector<Term> options{seq()};
    while (accept(Tok::plus)) options.push_back(seq());
    return Term::alt(std::move(options));
  }

  Term seq() {
    DepthGuard guard(*this);
    const Token& start = peek();
    bool is_action = false;
    Action a;
    Term f = factor(is_action, a);
    if (peek().kind != Tok::dot) return f;
    if (!is_action) fail(peek(), "left operand of '.' must be an action, found " + found(start));
    next();
    return Term::prefix(a, seq());
  }

  ChannelId channel(const Token& t) {
    auto c = sig().find_channel(t.text);
    if (!c) fail(t, "undefined channel '" + t.text + "'");
    return *c;
  }

  // CHAN op [DATUM]; the channel token has been consumed.
  Action action_after(const Token& chan_tok) {
    ChannelId c = channel(chan_tok);
    const Token& op = next();
    Polarity p = op.kind == Tok::bang ? Polarity::send : op.kind == Tok::query ? Polarity::receive : Polarity::comm;
    DatumId d = Signature::kUnit;
    if (peek().kind == Tok::ident) {
      const Token& dt = next();
      auto id = sig().find_datum(dt.text);
      if (!id) fail(dt, "undefined datum '" + dt.text + "'");
      d = *id;
      if (!sig().carries(c, d)) fail(dt, "channel '" + chan_tok.text + "' does not carry '" + dt.text + "'");
    } else if (!sig().carries(c, d)) {
      fail(op, "channel '" + chan_tok.text + "' needs a datum");
    }
    return {p, c, d};
  }

  static bool is_op(Tok k) { return k == Tok::bang || k == Tok::query || k == Tok::comm; }

  Term factor(bool& is_action, Action& a) {
    const Token& t = peek();
    is_action = false;
    if (t.kind == Tok::lparen) {
      next();
      Term inner = term();
      expect(Tok::rparen, "to close '('");
      return inner;
    }
    if (t.kind != Tok::ident) fail(t, "expected a term, found " + found(t));
    next();
    if (is_op(peek().kind)) {
      a = action_after(t);
      is_action = true;
      return Term::prefix(a, Term::epsilon());
    }
    if (t.text == "delta") return Term::delta();
    if (t.text == "epsilon") return Term::epsilon();
    if (t.text == "tau") {
      a = Action::tau();
      is_action = true;
      return Term::prefix(a, Term::epsilon());
    }
    if (t.text == "par") {
      expect(Tok::lparen, "after 'par'");
      Term l = term();
      expect(Tok::comma, "between 'par' operands");
      Term r = term();
      expect(Tok::rparen, "to close 'par'");
      return Term::par(std::move(l), std::move(r));
    }
    if (t.text == "encap" || t.text == "hide") {
      bool enc = t.text == "encap";
      expect(Tok::lparen, enc ? "after 'encap'" : "after 'hide'");
      expect(Tok::lbrace, "to open the action set");
      std::vector<Action> set;
      if (peek().kind != Tok::rbrace) {
        do {
          const Token& at = expect(Tok::ident, "in action set");
          if (!is_op(peek().kind)) fail(peek(), "expected '?', '!' or '?!' after '" + at.text + "'");
          Action x = action_after(at);
          if (enc && !x.is_send_or_receive()) fail(at, "encapsulation sets may only contain send/receive actions");
          if (!enc && x.polarity != Polarity::comm) fail(at, "hiding sets may only contain communication actions");
          set.push_back(x);
        } while (accept(Tok::comma));
      }
      expect(Tok::rbrace, "to close the action set");
      expect(Tok::comma, "after the action set");
      Term body = term();
      expect(Tok::rparen, "to close the operator");
      return enc ? Term::encap(make_action_set(std::move(set)), std::move(body))
                 : Term::hide(make_action_set(std::move(set)), std::move(body));
    }
    if (t.text == "rename") {
      expect(Tok::lparen, "after 'rename'");
      expect(Tok::lbrace, "to open the renaming");
      ChannelMap map;
      std::set<ChannelId> sources;
      if (peek().kind != Tok::rbrace) {
        do {
          const Token& from = expect(Tok::ident, "in renaming");
          ChannelId f = channel(from);
          expect(Tok::arrow, "in renaming");
          ChannelId to = channel(expect(Tok::ident, "in renaming"));
          if (!sources.insert(f).second) fail(from, "channel '" + from.text + "' renamed twice");
          if (std::vector<DatumId>(sig().channel_data(f).begin(), sig().channel_data(f).end()) !=
              std::vector<DatumId>(sig().channel_data(to).begin(), sig().channel_data(to).end()))
            fail(from, "renamed channels must carry the same data");
          map.emplace_back(f, to);
        } while (accept(Tok::comma));
      }
      expect(Tok::rbrace, "to close the renaming");
      expect(Tok::comma, "after the renaming");
      Term body = term();
      expect(Tok::rparen, "to close 'rename'");
      return Term::rename(make_channel_map(std::move(map)), std::move(body));
    }
    if (kKeywords.count(t.text) != 0) fail(t, "unexpected keyword '" + t.text + "'");
    if (t.text.back() == '\'') fail(t, "process names may not end in a quote");
    uses_.push_back({t.text, t.line, t.column});
    return Term::var(t.text);
  }

  void finish() {
    for (const auto& u : uses_)
      if (!file_.spec.find(u.name)) throw ParseError(u.line, u.column, "undefined process '" + u.name + "'");
    for (const auto& [n, tok] : role_refs_)
      if (!file_.spec.find(n)) fail(tok, "role refers to undefined process '" + n + "'");
    if (auto x = find_unguarded_variable(file_.spec)) fail(proc_tokens_.at(*x), "unguarded recursion through '" + *x + "'");

    auto check = [&](const Term& root, const std::string& what) {
      auto v = is_simple(file_.spec, root);
      if (!v.simple)
        file_.warnings.push_back(what + " is not simple: channel '" + sig().channel_name(*v.channel) +
                                 "' is used for both sending and receiving");
    };
    if (!file_.plants.empty()) check(file_.plant_term(), "plant");
    if (file_.supervisor) check(file_.supervisor_term(), "supervisor");
  }
};

}  // namespace

SpecFile parse_spec(std::string_view text) { return Parser(text).run(); }

}  // namespace desync
