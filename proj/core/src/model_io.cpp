#include "narmax/model_io.hpp"

#include <array>
#include <cctype>
#include <charconv>
#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include "narmax/error.hpp"

namespace narmax {

namespace {

enum class Tok { Number, Ident, LBracket, RBracket, Plus, Minus, Star, Caret, Equals, End };

struct Token {
  Tok kind = Tok::End;
  std::string_view text;
  double number = 0.0;
  std::size_t line = 1;
  std::size_t column = 1;
};

struct Metadata {
  std::string name;
  std::optional<double> noise_scale;
  std::optional<double> noise_mean;
  std::optional<int> order;
  std::size_t line = 0;  // line of the first directive, for error messages
};

std::string describe(const Token& t) {
  return t.kind == Tok::End ? std::string("end of input") : "'" + std::string(t.text) + "'";
}

class Lexer {
 public:
  explicit Lexer(std::string_view text) : text_(text) {}

  std::vector<Token> tokenize(Metadata& meta) {
    std::vector<Token> out;
    while (true) {
      skip_space_and_comments();
      if (pos_ >= text_.size()) break;
      const char c = text_[pos_];
      if (c == '@') {
        directive(meta);
        continue;
      }
      Token t;
      t.line = line_;
      t.column = column();
      const std::size_t start = pos_;
      if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
        t.kind = Tok::Number;
        t.number = number(t);
      } else if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
        while (pos_ < text_.size() && (std::isalnum(static_cast<unsigned char>(text_[pos_])) ||
                                       text_[pos_] == '_')) {
          ++pos_;
        }
        t.kind = Tok::Ident;
      } else {
        ++pos_;
        switch (c) {
          case '[': t.kind = Tok::LBracket; break;
          case ']': t.kind = Tok::RBracket; break;
          case '+': t.kind = Tok::Plus; break;
          case '-': t.kind = Tok::Minus; break;
          case '*': t.kind = Tok::Star; break;
          case '^': t.kind = Tok::Caret; break;
          case '=': t.kind = Tok::Equals; break;
          default:
            throw ParseError(ErrorCode::SyntaxError,
                             std::string("unexpected character '") + c + "'", t.line, t.column);
        }
      }
      t.text = text_.substr(start, pos_ - start);
      out.push_back(t);
    }
    Token end;
    end.line = line_;
    end.column = column();
    out.push_back(end);
    return out;
  }

 private:
  std::size_t column() const { return pos_ - line_start_ + 1; }

  void skip_space_and_comments() {
    while (pos_ < text_.size()) {
      const char c = text_[pos_];
      if (c == '\n') {
        ++pos_;
        ++line_;
        line_start_ = pos_;
      } else if (std::isspace(static_cast<unsigned char>(c))) {
        ++pos_;
      } else if (c == '#') {
        while (pos_ < text_.size() && text_[pos_] != '\n') ++pos_;
      } else {
        break;
      }
    }
  }

  double number(Token& t) {
    const char* first = text_.data() + pos_;
    const char* last = text_.data() + text_.size();
    double value = 0.0;
    const auto [ptr, ec] = std::from_chars(first, last, value);
    if (ec != std::errc() || !std::isfinite(value)) {
      throw ParseError(ErrorCode::SyntaxError, "malformed number", t.line, t.column);
    }
    pos_ += static_cast<std::size_t>(ptr - first);
    return value;
  }

  void directive(Metadata& meta) {
    const std::size_t line = line_;
    const std::size_t col = column();
    std::size_t end = text_.find('\n', pos_);
    if (end == std::string_view::npos) end = text_.size();
    std::string_view body = text_.substr(pos_ + 1, end - pos_ - 1);
    if (const auto hash = body.find('#'); hash != std::string_view::npos) body = body.substr(0, hash);
    pos_ = end;

    const auto key_end = body.find_first_of(" \t");
    const std::string_view key = body.substr(0, key_end);
    std::string_view value = key_end == std::string_view::npos ? std::string_view{} : body.substr(key_end);
    while (!value.empty() && std::isspace(static_cast<unsigned char>(value.front()))) value.remove_prefix(1);
    while (!value.empty() && std::isspace(static_cast<unsigned char>(value.back()))) value.remove_suffix(1);
    if (meta.line == 0) meta.line = line;

    auto parse_number = [&]() {
      double v = 0.0;
      const auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), v);
      if (ec != std::errc() || ptr != value.data() + value.size() || value.empty()) {
        throw ParseError(ErrorCode::SyntaxError, "@" + std::string(key) + " needs a number", line, col);
      }
      return v;
    };

    if (key == "name") {
      meta.name = std::string(value);
    } else if (key == "noise_scale") {
      meta.noise_scale = parse_number();
    } else if (key == "noise_mean") {
      meta.noise_mean = parse_number();
    } else if (key == "order") {
      const double v = parse_number();
      if (v < 0 || v != std::floor(v)) {
        throw ParseError(ErrorCode::SyntaxError, "@order needs a non-negative integer", line, col);
      }
      meta.order = static_cast<int>(v);
    } else {
      throw ParseError(ErrorCode::SyntaxError, "unknown directive '@" + std::string(key) + "'", line, col);
    }
  }

  std::string_view text_;
  std::size_t pos_ = 0;
  std::size_t line_ = 1;
  std::size_t line_start_ = 0;
};

struct ParsedSignal {
  SignalKind kind;
  int lag;
  bool is_sim;  // written as ys
  Token at;
};

class Parser {
 public:
  Parser(std::vector<Token> tokens) : tokens_(std::move(tokens)) {}

  ModelDocument parse(std::string_view source, const Metadata& meta) {
    const Token lhs = expect(Tok::Ident, "'y[k]' or 'ys[k]'");
    if (lhs.text != "y" && lhs.text != "ys") {
      fail(lhs, "the left-hand side must be y[k] or ys[k]");
    }
    simulation_ = lhs.text == "ys";
    const int lhs_lag = index_suffix(lhs);
    if (lhs_lag != 0) fail(lhs, "the left-hand side must be written at lag 0");
    expect(Tok::Equals, "'='");

    std::vector<LaggedMonomial> terms;
    bool additive_noise = false;
    Token noise_token;
    bool first = true;
    while (true) {
      double sign = 1.0;
      if (peek().kind == Tok::Plus || peek().kind == Tok::Minus) {
        sign = next().kind == Tok::Minus ? -1.0 : 1.0;
      } else if (!first) {
        if (peek().kind == Tok::End) break;
        fail(peek(), "expected '+' or '-' between terms, found " + describe(peek()));
      }
      if (additive_noise) {
        fail(noise_token, "the additive noise term e[k] must be the last term");
      }
      const Token start = peek();
      bool is_additive = false;
      LaggedMonomial term = parse_term(sign, is_additive);
      if (is_additive) {
        if (sign < 0) fail(start, "the additive noise term must be '+ e[k]'");
        additive_noise = true;
        noise_token = start;
      } else {
        terms.push_back(std::move(term));
      }
      first = false;
      if (peek().kind == Tok::End) break;
    }

    ModelDocument doc;
    doc.source = std::string(source);
    if (simulation_) {
      if (meta.noise_scale || meta.noise_mean) {
        throw ParseError(ErrorCode::SyntaxError, "noise directives do not apply to simulation models",
                         meta.line, 1);
      }
      doc.model = SimModel(Polynomial(std::move(terms)), meta.order, meta.name);
    } else {
      if (!additive_noise) {
        const Token& end = tokens_.back();
        throw ParseError(ErrorCode::MissingAdditiveNoise,
                         "prediction models must end with the additive noise term '+ e[k]'", end.line,
                         end.column);
      }
      if (meta.order) {
        throw ParseError(ErrorCode::SyntaxError, "@order applies to simulation models only", meta.line, 1);
      }
      NoiseModel noise;
      if (meta.noise_scale) noise.scale = *meta.noise_scale;
      if (meta.noise_mean) noise.mean = *meta.noise_mean;
      if (!(noise.scale > 0.0)) {
        throw ParseError(ErrorCode::SyntaxError, "@noise_scale must be positive", meta.line, 1);
      }
      doc.model = NarmaxModel(Polynomial(std::move(terms)), noise, meta.name);
    }
    return doc;
  }

 private:
  [[noreturn]] static void fail(const Token& t, const std::string& message,
                                ErrorCode code = ErrorCode::SyntaxError) {
    throw ParseError(code, message, t.line, t.column);
  }

  const Token& peek() const { return tokens_[pos_]; }
  const Token& next() { return tokens_[pos_ < tokens_.size() - 1 ? pos_++ : pos_]; }

  Token expect(Tok kind, const char* what) {
    if (peek().kind != kind) fail(peek(), std::string("expected ") + what + ", found " + describe(peek()));
    return next();
  }

  // Parses "[k]" or "[k-<lag>]" after a signal name and returns the lag.
  int index_suffix(const Token& name) {
    expect(Tok::LBracket, "'['");
    const Token k = expect(Tok::Ident, "'k'");
    if (k.text != "k") fail(k, "the time index must be 'k'");
    int lag = 0;
    if (peek().kind == Tok::Minus || peek().kind == Tok::Plus) {
      const Token op = next();
      const Token n = expect(Tok::Number, "an integer lag");
      if (n.number != std::floor(n.number) || n.text.find_first_of(".eE") != std::string_view::npos) {
        fail(n, "lags must be integers");
      }
      if (op.kind == Tok::Plus && n.number != 0) {
        fail(op, "future samples (k+" + std::string(n.text) + ") are not allowed", ErrorCode::IllegalLag);
      }
      if (n.number > 1e6) fail(n, "lag is too large", ErrorCode::IllegalLag);
      lag = static_cast<int>(n.number);
    }
    expect(Tok::RBracket, "']'");
    (void)name;
    return lag;
  }

  ParsedSignal signal(const Token& name) {
    const int lag = index_suffix(name);
    if (name.text == "u") return {SignalKind::Input, lag, false, name};
    if (name.text == "e") {
      if (simulation_) fail(name, "simulation models cannot contain noise terms");
      return {SignalKind::Noise, lag, false, name};
    }
    if (name.text == "y") {
      if (simulation_) fail(name, "simulation models reference past outputs as ys[k-r]");
      return {SignalKind::Output, lag, false, name};
    }
    if (name.text == "ys") {
      if (!simulation_) fail(name, "prediction models cannot reference simulated outputs ys");
      return {SignalKind::SimOutput, lag, true, name};
    }
    fail(name, "unknown signal '" + std::string(name.text) + "' (expected u, y, e or ys)");
  }

  LaggedMonomial parse_term(double sign, bool& is_additive_noise) {
    LaggedMonomial term{sign, {}};
    int factor_count = 0;
    bool bare_noise = false;
    Token noise_at;
    while (true) {
      const Token t = next();
      ++factor_count;
      if (t.kind == Tok::Number) {
        term.coefficient *= t.number;
      } else if (t.kind == Tok::Ident) {
        ParsedSignal s = signal(t);
        int exponent = 1;
        if (peek().kind == Tok::Caret) {
          next();
          const Token e = expect(Tok::Number, "an integer exponent");
          if (e.number != std::floor(e.number) || e.number < 0 || e.number > 1000 ||
              e.text.find_first_of(".eE") != std::string_view::npos) {
            fail(e, "exponents must be non-negative integers");
          }
          exponent = static_cast<int>(e.number);
        }
        if (s.lag == 0 && s.kind != SignalKind::Input) {
          if (s.kind == SignalKind::Noise && exponent == 1) {
            bare_noise = true;
            noise_at = t;
          } else {
            fail(t, std::string(t.text) + "[k] cannot appear inside a model term", ErrorCode::IllegalLag);
          }
        } else if (exponent > 0) {
          term.factors.push_back({{s.kind, s.lag}, exponent});
        }
      } else {
        fail(t, "expected a number or a signal, found " + describe(t));
      }
      if (peek().kind != Tok::Star) break;
      next();
    }
    if (bare_noise) {
      if (factor_count != 1) {
        fail(noise_at, "e[k] cannot appear inside a model term; write it once as the final '+ e[k]'",
             ErrorCode::IllegalLag);
      }
      is_additive_noise = true;
    }
    return term;
  }

  std::vector<Token> tokens_;
  std::size_t pos_ = 0;
  bool simulation_ = false;
};

std::string signal_text(SignalRef s) {
  std::string name;
  switch (s.kind) {
    case SignalKind::Input: name = "u"; break;
    case SignalKind::Output: name = "y"; break;
    case SignalKind::SimOutput: name = "ys"; break;
    case SignalKind::Noise: name = "e"; break;
  }
  return s.lag == 0 ? name + "[k]" : name + "[k-" + std::to_string(s.lag) + "]";
}

}  // namespace

std::string format_double(double value, int precision) {
  std::array<char, 64> buffer{};
  const auto [ptr, ec] =
      precision > 0 ? std::to_chars(buffer.data(), buffer.data() + buffer.size(), value,
                                    std::chars_format::general, precision)
                    : std::to_chars(buffer.data(), buffer.data() + buffer.size(), value);
  if (ec != std::errc()) throw Error(ErrorCode::InvalidArgument, "cannot format number");
  return std::string(buffer.data(), ptr);
}

ModelDocument parse_document(std::string_view text) {
  Metadata meta;
  Lexer lexer(text);
  auto tokens = lexer.tokenize(meta);
  if (tokens.size() == 1) {
    throw ParseError(ErrorCode::SyntaxError, "empty model file", tokens.front().line,
                     tokens.front().column);
  }
  return Parser(std::move(tokens)).parse(text, meta);
}

NarmaxModel parse_model(std::string_view text) {
  ModelDocument doc = parse_document(text);
  if (doc.is_simulation()) {
    throw ParseError(ErrorCode::SyntaxError, "expected a prediction model 'y[k] = ... + e[k]'", 1, 1);
  }
  return std::get<NarmaxModel>(std::move(doc.model));
}

SimModel parse_sim_model(std::string_view text) {
  ModelDocument doc = parse_document(text);
  if (!doc.is_simulation()) {
    throw ParseError(ErrorCode::SyntaxError, "expected a simulation model 'ys[k] = ...'", 1, 1);
  }
  return std::get<SimModel>(std::move(doc.model));
}

std::string print_polynomial(const Polynomial& p, const PrintOptions& options) {
  std::string out;
  bool first = true;
  for (const auto& t : p.terms()) {
    const bool negative = t.coefficient < 0;
    const double magnitude = std::abs(t.coefficient);
    if (first) {
      if (negative) out += "-";
    } else {
      out += negative ? " - " : " + ";
    }
    first = false;
    std::string body;
    if (t.factors.empty() || magnitude != 1.0) body = format_double(magnitude, options.precision);
    for (const auto& f : t.factors) {
      if (!body.empty()) body += "*";
      body += signal_text(f.signal);
      if (f.exponent != 1) body += "^" + std::to_string(f.exponent);
    }
    out += body;
  }
  return out;
}

std::string print_model(const NarmaxModel& model, const PrintOptions& options) {
  std::string out;
  if (!model.name().empty()) out += "@name " + model.name() + "\n";
  if (model.noise().scale != 1.0) out += "@noise_scale " + format_double(model.noise().scale) + "\n";
  if (model.noise().mean != 0.0) out += "@noise_mean " + format_double(model.noise().mean) + "\n";
  out += "y[k] = ";
  if (!model.f().empty()) out += print_polynomial(model.f(), options) + " + ";
  out += "e[k]\n";
  return out;
}

std::string print_sim_model(const SimModel& model, const PrintOptions& options) {
  std::string out;
  if (!model.name().empty()) out += "@name " + model.name() + "\n";
  if (model.order()) out += "@order " + std::to_string(*model.order()) + "\n";
  out += "ys[k] = ";
  out += model.f().empty() ? std::string("0") : print_polynomial(model.f(), options);
  out += "\n";
  return out;
}

}  // namespace narmax
