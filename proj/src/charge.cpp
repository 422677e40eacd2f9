#include "charge.hpp"

#include <cctype>

#include "errors.hpp"

namespace chargeaudit {

namespace {

bool is_digit(char c) { return c >= '0' && c <= '9'; }
bool is_alpha(char c) { return (c >= 'A' && c <= 'Z') || (c >= 'a' && c <= 'z'); }

std::optional<CodeBody> known_body(std::string_view s) {
  if (s == "PC") return CodeBody::PC;
  if (s == "VC") return CodeBody::VC;
  if (s == "HS") return CodeBody::HS;
  return std::nullopt;
}

struct Head {
  std::string statute;
  std::vector<std::string> subdivisions;
  std::string attached_body;
};

// statute digits, optional ".digits" groups, optional letter suffix
// (attached "653F" or spaced "273 A(B)"), then "(x)" subdivisions.
bool parse_head(std::string_view s, std::size_t& pos, Head& head) {
  const std::size_t n = s.size();
  if (pos >= n || !is_digit(s[pos])) return false;
  std::size_t start = pos;
  while (pos < n && is_digit(s[pos])) ++pos;
  while (pos + 1 < n && s[pos] == '.' && is_digit(s[pos + 1])) {
    ++pos;
    while (pos < n && is_digit(s[pos])) ++pos;
  }
  head.statute = std::string(s.substr(start, pos - start));

  std::size_t run_start = pos;
  while (pos < n && is_alpha(s[pos])) ++pos;
  std::string_view run = s.substr(run_start, pos - run_start);
  if (run.size() == 1) {
    head.statute += run;
  } else if (run.size() >= 2) {
    if (known_body(run)) {
      head.attached_body = std::string(run);
    } else if (run.size() == 3 && known_body(run.substr(1))) {
      head.statute += run[0];
      head.attached_body = std::string(run.substr(1));
    } else {
      head.statute += run;
    }
  }
  if (run.empty() && pos + 2 < n && s[pos] == ' ' && is_alpha(s[pos + 1]) && s[pos + 2] == '(') {
    head.statute += s[pos + 1];
    pos += 2;
  }
  while (pos < n && s[pos] == '(') {
    std::size_t close = s.find(')', pos);
    if (close == std::string_view::npos) break;
    std::string_view content = s.substr(pos + 1, close - pos - 1);
    while (!content.empty() && content.front() == ' ') content.remove_prefix(1);
    while (!content.empty() && content.back() == ' ') content.remove_suffix(1);
    if (!content.empty()) head.subdivisions.emplace_back(content);
    pos = close + 1;
  }
  return true;
}

std::string head_text(const Head& h) {
  std::string out = h.statute;
  for (const auto& sub : h.subdivisions) out += "(" + sub + ")";
  return out;
}

void set_body(ChargeCode& c, std::string_view token) {
  c.body_text = std::string(token);
  c.body = known_body(token).value_or(CodeBody::Other);
}

}  // namespace

std::string_view to_string(Derivative d) {
  switch (d) {
    case Derivative::None: return "none";
    case Derivative::Attempt: return "attempt";
    case Derivative::Conspiracy: return "conspiracy";
    case Derivative::Solicitation: return "solicitation";
    case Derivative::FailureToAppearOf: return "fta";
  }
  return "none";
}

std::optional<Derivative> parse_derivative(std::string_view text) {
  std::string t;
  for (char c : text) t.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
  if (t == "none" || t.empty()) return Derivative::None;
  if (t == "attempt") return Derivative::Attempt;
  if (t == "conspiracy") return Derivative::Conspiracy;
  if (t == "solicitation") return Derivative::Solicitation;
  if (t == "fta" || t == "failure_to_appear") return Derivative::FailureToAppearOf;
  return std::nullopt;
}

const PrefixTable& default_prefixes() {
  static const PrefixTable table{{"664", Derivative::Attempt}};
  return table;
}

std::string normalize_charge_text(std::string_view text) {
  std::string collapsed;
  collapsed.reserve(text.size());
  bool pending_space = false;
  for (char c : text) {
    if (c == ' ' || c == '\t' || c == '\r' || c == '\n') {
      pending_space = !collapsed.empty();
      continue;
    }
    if (pending_space) {
      collapsed.push_back(' ');
      pending_space = false;
    }
    collapsed.push_back(static_cast<char>(std::toupper(static_cast<unsigned char>(c))));
  }
  std::string out;
  out.reserve(collapsed.size());
  for (std::size_t i = 0; i < collapsed.size(); ++i) {
    char c = collapsed[i];
    if (c == ' ' && i + 1 < collapsed.size() &&
        (collapsed[i + 1] == '(' || collapsed[i + 1] == '/')) {
      continue;
    }
    if (c == ' ' && !out.empty() && out.back() == '/') continue;
    out.push_back(c);
  }
  return out;
}

ChargeCode parse_charge_code(std::string_view text, const PrefixTable& prefixes) {
  const std::string s = normalize_charge_text(text);
  if (s.empty()) throw ParseError("empty charge code");

  ChargeCode code;
  code.raw = std::string(text);
  std::size_t pos = 0;
  Head head;
  if (!parse_head(s, pos, head)) {
    throw ParseError("no leading statute number in charge '" + std::string(text) + "'");
  }
  if (pos < s.size() && s[pos] == '/') {
    code.prefix = head_text(head);
    auto it = prefixes.find(code.prefix);
    if (it == prefixes.end()) it = prefixes.find(head.statute);
    if (it != prefixes.end()) code.derivative = it->second;
    ++pos;
    head = Head{};
    if (!parse_head(s, pos, head)) {
      throw ParseError("no statute number after '/' in charge '" + std::string(text) + "'");
    }
    if (pos < s.size() && s[pos] == '/') {
      throw ParseError("nested derivative prefix in charge '" + std::string(text) + "'");
    }
  }
  code.statute = head.statute;
  code.subdivisions = head.subdivisions;
  if (!head.attached_body.empty()) set_body(code, head.attached_body);

  std::string_view rest = std::string_view(s).substr(pos);
  while (!rest.empty()) {
    while (!rest.empty() && rest.front() == ' ') rest.remove_prefix(1);
    if (rest.empty()) break;
    std::size_t end = rest.find(' ');
    std::string_view tok = rest.substr(0, end);
    rest = end == std::string_view::npos ? std::string_view{} : rest.substr(end);

    bool all_alpha = true, all_digit = true;
    for (char c : tok) {
      all_alpha = all_alpha && is_alpha(c);
      all_digit = all_digit && is_digit(c);
    }
    if ((tok == "F" || tok == "M") && code.charge_class == ChargeClass::Unspecified) {
      code.charge_class = tok == "F" ? ChargeClass::Felony : ChargeClass::Misdemeanor;
    } else if (all_alpha && tok.size() >= 2 && code.body == CodeBody::Unspecified) {
      set_body(code, tok);
    } else if (all_digit && tok.size() <= 2 && !code.degree && tok != "0" && tok != "00") {
      code.degree = std::stoi(std::string(tok));
    } else {
      code.trailing.emplace_back(tok);
    }
  }
  return code;
}

std::string ChargeCode::canonical() const {
  std::string out;
  if (!prefix.empty()) out += prefix + "/";
  out += statute;
  for (const auto& sub : subdivisions) out += "(" + sub + ")";
  if (body != CodeBody::Unspecified) out += " " + body_text;
  if (charge_class == ChargeClass::Felony) out += " F";
  if (charge_class == ChargeClass::Misdemeanor) out += " M";
  if (degree) out += " " + std::to_string(*degree);
  for (const auto& t : trailing) out += " " + t;
  return out;
}

bool ChargeCode::operator==(const ChargeCode& o) const {
  return statute == o.statute && subdivisions == o.subdivisions && body == o.body &&
         body_text == o.body_text && charge_class == o.charge_class && degree == o.degree &&
         derivative == o.derivative && prefix == o.prefix && trailing == o.trailing;
}

std::vector<std::string> split_charge_list(std::string_view field) {
  std::vector<std::string> out;
  while (true) {
    std::size_t cut = field.find(';');
    std::string_view item = field.substr(0, cut);
    while (!item.empty() && std::isspace(static_cast<unsigned char>(item.front()))) item.remove_prefix(1);
    while (!item.empty() && std::isspace(static_cast<unsigned char>(item.back()))) item.remove_suffix(1);
    if (!item.empty()) out.emplace_back(item);
    if (cut == std::string_view::npos) break;
    field.remove_prefix(cut + 1);
  }
  return out;
}

std::string join_charge_list(const std::vector<ChargeCode>& charges) {
  std::string out;
  for (const auto& c : charges) {
    if (!out.empty()) out += ";";
    out += c.raw.empty() ? c.canonical() : normalize_charge_text(c.raw);
  }
  return out;
}

}  // namespace chargeaudit
