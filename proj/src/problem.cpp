#include "wkbsplit/problem.hpp"

#include <cctype>
#include <cmath>
#include <numbers>
#include <vector>

#include "wkbsplit/errors.hpp"

namespace wkbsplit {

struct Expression::Node {
  enum class Kind { number, variable, negate, add, sub, mul, div, pow, call } kind;
  double value = 0.0;
  double (*func)(double) = nullptr;
  std::shared_ptr<const Node> lhs;
  std::shared_ptr<const Node> rhs;

  double eval(double x) const {
    switch (kind) {
      case Kind::number:
        return value;
      case Kind::variable:
        return x;
      case Kind::negate:
        return -lhs->eval(x);
      case Kind::add:
        return lhs->eval(x) + rhs->eval(x);
      case Kind::sub:
        return lhs->eval(x) - rhs->eval(x);
      case Kind::mul:
        return lhs->eval(x) * rhs->eval(x);
      case Kind::div:
        return lhs->eval(x) / rhs->eval(x);
      case Kind::pow:
        return std::pow(lhs->eval(x), rhs->eval(x));
      case Kind::call:
        return func(lhs->eval(x));
    }
    return 0.0;
  }
};

namespace {

using NodePtr = std::shared_ptr<const Expression::Node>;
using Kind = Expression::Node::Kind;

NodePtr make(Kind kind, NodePtr lhs = nullptr, NodePtr rhs = nullptr) {
  auto n = std::make_shared<Expression::Node>();
  n->kind = kind;
  n->lhs = std::move(lhs);
  n->rhs = std::move(rhs);
  return n;
}

double fn_sin(double v) { return std::sin(v); }
double fn_cos(double v) { return std::cos(v); }
double fn_tan(double v) { return std::tan(v); }
double fn_exp(double v) { return std::exp(v); }
double fn_log(double v) { return std::log(v); }
double fn_sqrt(double v) { return std::sqrt(v); }
double fn_abs(double v) { return std::abs(v); }
double fn_sinh(double v) { return std::sinh(v); }
double fn_cosh(double v) { return std::cosh(v); }
double fn_tanh(double v) { return std::tanh(v); }
double fn_atan(double v) { return std::atan(v); }

struct Function {
  std::string_view name;
  double (*f)(double);
};

constexpr Function kFunctions[] = {{"sin", fn_sin},   {"cos", fn_cos},   {"tan", fn_tan},
                                   {"exp", fn_exp},   {"log", fn_log},   {"sqrt", fn_sqrt},
                                   {"abs", fn_abs},   {"sinh", fn_sinh}, {"cosh", fn_cosh},
                                   {"tanh", fn_tanh}, {"atan", fn_atan}};

class Parser {
 public:
  explicit Parser(std::string_view text) : text_(text) {}

  NodePtr parse() {
    NodePtr root = expr();
    skip_space();
    if (pos_ != text_.size()) fail("unexpected '" + std::string(1, text_[pos_]) + "'");
    return root;
  }

 private:
  [[noreturn]] void fail(const std::string& what) const {
    throw InvalidInput("expression '" + std::string(text_) + "': " + what + " at offset " +
                       std::to_string(pos_));
  }

  void skip_space() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  bool accept(char c) {
    skip_space();
    if (pos_ < text_.size() && text_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  NodePtr expr() {
    NodePtr lhs = term();
    for (;;) {
      if (accept('+')) {
        lhs = make(Kind::add, lhs, term());
      } else if (accept('-')) {
        lhs = make(Kind::sub, lhs, term());
      } else {
        return lhs;
      }
    }
  }

  NodePtr term() {
    NodePtr lhs = unary();
    for (;;) {
      if (accept('*')) {
        lhs = make(Kind::mul, lhs, unary());
      } else if (accept('/')) {
        lhs = make(Kind::div, lhs, unary());
      } else {
        return lhs;
      }
    }
  }

  NodePtr unary() {
    if (accept('-')) return make(Kind::negate, unary());
    if (accept('+')) return unary();
    return power();
  }

  NodePtr power() {
    NodePtr base = primary();
    if (accept('^')) return make(Kind::pow, base, unary());
    return base;
  }

  NodePtr primary() {
    skip_space();
    if (pos_ >= text_.size()) fail("unexpected end of input");
    const char c = text_[pos_];
    if (accept('(')) {
      NodePtr inner = expr();
      if (!accept(')')) fail("expected ')'");
      return inner;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return number();
    if (std::isalpha(static_cast<unsigned char>(c))) return identifier();
    fail("unexpected '" + std::string(1, c) + "'");
  }

  NodePtr number() {
    const std::string rest(text_.substr(pos_));
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(rest, &used);
    } catch (const std::exception&) {
      fail("malformed number");
    }
    pos_ += used;
    auto n = std::make_shared<Expression::Node>();
    n->kind = Kind::number;
    n->value = v;
    return n;
  }

  NodePtr identifier() {
    const std::size_t start = pos_;
    while (pos_ < text_.size() && std::isalnum(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    const std::string_view name = text_.substr(start, pos_ - start);
    if (name == "x") return make(Kind::variable);
    if (name == "pi") {
      auto n = std::make_shared<Expression::Node>();
      n->kind = Kind::number;
      n->value = std::numbers::pi;
      return n;
    }
    for (const Function& f : kFunctions) {
      if (f.name == name) {
        if (!accept('(')) fail("expected '(' after " + std::string(name));
        NodePtr arg = expr();
        if (!accept(')')) fail("expected ')'");
        auto n = std::make_shared<Expression::Node>();
        n->kind = Kind::call;
        n->func = f.f;
        n->lhs = std::move(arg);
        return n;
      }
    }
    fail("unknown identifier '" + std::string(name) + "'");
  }

  std::string_view text_;
  std::size_t pos_ = 0;
};

}  // namespace

Expression::Expression(std::string source, std::shared_ptr<const Node> root)
    : source_(std::move(source)), root_(std::move(root)) {}

Expression Expression::parse(std::string_view text) {
  return Expression(std::string(text), Parser(text).parse());
}

double Expression::operator()(double x) const { return root_->eval(x); }

double benchmark_potential(double x) {
  const double c = std::cos(x);
  return std::sin(x) / (1.0 + c * c);
}

InitialData InitialData::caustic_benchmark() {
  InitialData d;
  d.name = "paper41";
  d.phase = [](double x) { return 0.5 * std::sin(x); };
  d.amplitude = [](double x) { return Complex{std::sin(x), 0.0}; };
  d.potential = benchmark_potential;
  d.canonical = "builtin:paper41";
  return d;
}

InitialData InitialData::from_expressions(std::string_view phase, std::string_view amplitude_re,
                                          std::string_view amplitude_im,
                                          std::string_view potential) {
  const Expression s0 = Expression::parse(phase);
  const Expression are = Expression::parse(amplitude_re);
  const Expression aim = Expression::parse(amplitude_im);
  const Expression v = Expression::parse(potential);
  InitialData d;
  d.name = "expr";
  d.phase = s0;
  d.amplitude = [are, aim](double x) { return Complex{are(x), aim(x)}; };
  d.potential = v;
  d.canonical = "expr:s0=" + s0.source() + ";a0=" + are.source() + ";a0_im=" + aim.source() +
                ";v=" + v.source();
  return d;
}

WkbState InitialData::wkb_state(const PeriodicGrid& grid) const {
  return WkbState(RealField::sample(grid, phase), ComplexField::sample(grid, amplitude));
}

WaveState InitialData::wave_state(const PeriodicGrid& grid, double eps) const {
  return reconstruct_wave(wkb_state(grid), eps);
}

Potential InitialData::sampled_potential(const PeriodicGrid& grid) const {
  return Potential::analytic(grid, name == "paper41" ? "sin(x)/(1+cos(x)^2)" : canonical,
                             potential);
}

}  // namespace wkbsplit
