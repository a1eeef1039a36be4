#include "maxreal/specfile.hpp"

#include <sstream>
#include <stdexcept>

namespace maxreal::spec {

namespace {

[[noreturn]] void fail(int line, const std::string& msg) {
  throw std::runtime_error("spec file line " + std::to_string(line) + ": " + msg);
}

std::string trim(const std::string& s) {
  size_t a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return "";
  size_t b = s.find_last_not_of(" \t\r");
  return s.substr(a, b - a + 1);
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : s) {
    if (c == sep) {
      out.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  out.push_back(cur);
  return out;
}

std::vector<std::string> names(const std::string& s) {
  std::vector<std::string> out;
  std::istringstream is(s);
  std::string w;
  while (is >> w) out.push_back(w);
  return out;
}

ltl::WeightScheme scheme_of(const std::string& name, int line) {
  if (name == "default") return ltl::WeightScheme::Default;
  if (name == "general") return ltl::WeightScheme::General;
  if (name == "priority_ordered") return ltl::WeightScheme::PriorityOrdered;
  if (name == "priority_strict") return ltl::WeightScheme::PriorityStrict;
  if (name == "user") return ltl::WeightScheme::User;
  fail(line, "unknown scheme '" + name + "'");
}

const char* scheme_name(ltl::WeightScheme s) {
  switch (s) {
    case ltl::WeightScheme::Default: return "default";
    case ltl::WeightScheme::General: return "general";
    case ltl::WeightScheme::PriorityOrdered: return "priority_ordered";
    case ltl::WeightScheme::PriorityStrict: return "priority_strict";
    case ltl::WeightScheme::User: return "user";
  }
  return "default";
}

ltl::Formula parse_formula(const std::string& text, int line) {
  try {
    return ltl::parse(text);
  } catch (const ltl::ParseError& e) {
    fail(line, std::string("formula error: ") + e.what());
  }
}

}  // namespace

ltl::SpecProblem parse_spec_file(const std::string& text) {
  ltl::SpecProblem p;
  std::vector<ltl::Formula> hard;
  bool saw_inputs = false, saw_outputs = false;

  std::istringstream is(text);
  std::string raw;
  int lineno = 0;
  while (std::getline(is, raw)) {
    ++lineno;
    std::string line = trim(raw);
    if (line.empty() || line[0] == '#') continue;
    // Bracketed key options may themselves contain ':' (weight lists), so
    // the key/value separator is the first ':' after any closing ']'.
    size_t colon = line.find(':');
    size_t open = line.find('[');
    if (open != std::string::npos && open < colon) {
      size_t close = line.find(']', open);
      if (close == std::string::npos) fail(lineno, "unterminated '[' in key");
      colon = line.find(':', close);
    }
    if (colon == std::string::npos) fail(lineno, "expected 'key: value'");
    std::string key = trim(line.substr(0, colon));
    std::string value = trim(line.substr(colon + 1));

    std::string opts;
    size_t br = key.find('[');
    if (br != std::string::npos) {
      if (key.back() != ']') fail(lineno, "unterminated '[' in key");
      opts = key.substr(br + 1, key.size() - br - 2);
      key = key.substr(0, br);
    }

    if (key == "inputs") {
      if (saw_inputs) fail(lineno, "duplicate inputs section");
      saw_inputs = true;
      p.inputs = names(value);
    } else if (key == "outputs") {
      if (saw_outputs) fail(lineno, "duplicate outputs section");
      saw_outputs = true;
      p.outputs = names(value);
    } else if (key == "hard") {
      if (!opts.empty()) fail(lineno, "hard lines take no options");
      hard.push_back(parse_formula(value, lineno));
    } else if (key == "soft") {
      bool chain_shape = false;
      std::vector<long long> weights;
      for (const auto& o : split(opts, ',')) {
        std::string opt = trim(o);
        if (opt.empty()) continue;
        size_t eq = opt.find('=');
        std::string oname = eq == std::string::npos ? opt : trim(opt.substr(0, eq));
        std::string oval = eq == std::string::npos ? "" : trim(opt.substr(eq + 1));
        if (oname == "relax") {
          if (oval == "chain")
            chain_shape = true;
          else if (oval != "gfg")
            fail(lineno, "relax option must be gfg or chain");
        } else if (oname == "weight") {
          // One weight per chain level, strongest first, ':'-separated.
          for (const auto& wtext : split(oval, ':')) {
            try {
              weights.push_back(std::stoll(trim(wtext)));
            } catch (const std::exception&) {
              fail(lineno, "bad weight '" + trim(wtext) + "'");
            }
          }
        } else {
          fail(lineno, "unknown soft option '" + oname + "'");
        }
      }
      ltl::SoftSpec s;
      if (chain_shape) {
        for (const auto& part : split(value, ';')) {
          std::string ftext = trim(part);
          if (ftext.empty()) fail(lineno, "empty chain level");
          s.relax_chain.push_back(parse_formula(ftext, lineno));
        }
        s.formula = s.relax_chain.front();
      } else {
        try {
          s = ltl::SoftSpec::with_default_chain(parse_formula(value, lineno));
        } catch (const ltl::NotSafetyShape& e) {
          fail(lineno, std::string("not usable with the default chain: ") + e.what());
        }
      }
      s.user_weights = weights;
      p.soft.push_back(std::move(s));
    } else if (key == "options") {
      for (const auto& o : names(value)) {
        size_t eq = o.find('=');
        if (eq == std::string::npos) fail(lineno, "options entries look like key=value");
        std::string oname = o.substr(0, eq), oval = o.substr(eq + 1);
        if (oname == "scheme")
          p.scheme = scheme_of(oval, lineno);
        else
          fail(lineno, "unknown option '" + oname + "'");
      }
    } else {
      fail(lineno, "unknown key '" + key + "'");
    }
  }
  if (!saw_inputs || !saw_outputs) throw std::runtime_error("spec file needs inputs: and outputs:");
  p.hard = ltl::f_and_all(hard);
  p.validate();
  return p;
}

std::string emit_spec_file(const ltl::SpecProblem& p) {
  std::ostringstream os;
  os << "inputs:";
  for (const auto& i : p.inputs) os << ' ' << i;
  os << "\noutputs:";
  for (const auto& o : p.outputs) os << ' ' << o;
  os << "\n";
  if (p.scheme != ltl::WeightScheme::Default) os << "options: scheme=" << scheme_name(p.scheme) << "\n";

  // Split the hard conjunction back into the lines it was folded from.
  std::vector<ltl::Formula> hard;
  ltl::Formula f = p.hard;
  while (f->op == ltl::Op::And) {
    hard.push_back(f->rhs);
    f = f->lhs;
  }
  hard.push_back(f);
  for (auto it = hard.rbegin(); it != hard.rend(); ++it) os << "hard: " << ltl::to_string(*it) << "\n";

  for (const auto& s : p.soft) {
    bool default_chain = s.formula->op == ltl::Op::Globally &&
                         ltl::is_syntactically_safe(s.formula) && s.relax_chain.size() == 3;
    if (default_chain) {
      auto def = ltl::relax_vector(s.formula);
      for (int i = 0; i < 3 && default_chain; ++i)
        default_chain = ltl::equal(s.relax_chain[i], def[i]);
    }
    os << "soft";
    std::string opts;
    if (!default_chain) opts = "relax=chain";
    if (!s.user_weights.empty()) {
      if (!opts.empty()) opts += ",";
      opts += "weight=";
      for (size_t i = 0; i < s.user_weights.size(); ++i) {
        if (i) opts += ":";
        opts += std::to_string(s.user_weights[i]);
      }
    }
    if (!opts.empty()) os << '[' << opts << ']';
    os << ": ";
    if (default_chain) {
      os << ltl::to_string(s.formula);
    } else {
      for (size_t i = 0; i < s.relax_chain.size(); ++i) {
        if (i) os << " ; ";
        os << ltl::to_string(s.relax_chain[i]);
      }
    }
    os << "\n";
  }
  return os.str();
}

}  // namespace maxreal::spec
