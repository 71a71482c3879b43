#include <algorithm>
#include <cctype>
#include <fstream>
#include <set>
#include <sstream>

#include "informality/detail/text.hpp"
#include "informality/ingest.hpp"

namespace informality {
namespace {

enum class Tok { Ident, Number, String, LBrace, RBrace, Equals, Comma, Semicolon, End };

struct Token {
  Tok kind;
  std::string text;
  std::size_t line;
  std::size_t column;
};

const char* describe(Tok t) {
  switch (t) {
    case Tok::Ident: return "identifier";
    case Tok::Number: return "number";
    case Tok::String: return "string";
    case Tok::LBrace: return "'{'";
    case Tok::RBrace: return "'}'";
    case Tok::Equals: return "'='";
    case Tok::Comma: return "','";
    case Tok::Semicolon: return "';'";
    case Tok::End: return "end of input";
  }
  return "token";
}

class Lexer {
 public:
  explicit Lexer(std::string_view text) : text_(text) {}

  Token next() {
    skip_space();
    const std::size_t line = line_, column = column_;
    if (pos_ >= text_.size()) return {Tok::End, "", line, column};
    const char ch = text_[pos_];
    auto single = [&](Tok kind) {
      advance();
      return Token{kind, std::string(1, ch), line, column};
    };
    switch (ch) {
      case '{': return single(Tok::LBrace);
      case '}': return single(Tok::RBrace);
      case '=': return single(Tok::Equals);
      case ',': return single(Tok::Comma);
      case ';': return single(Tok::Semicolon);
      case '"': return string_literal(line, column);
      default: break;
    }
    if (std::isdigit(static_cast<unsigned char>(ch))) {
      std::string s;
      while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
        s.push_back(text_[pos_]);
        advance();
      }
      return {Tok::Number, s, line, column};
    }
    if (std::isalpha(static_cast<unsigned char>(ch)) || ch == '_') {
      std::string s;
      while (pos_ < text_.size()) {
        const char c = text_[pos_];
        if (!std::isalnum(static_cast<unsigned char>(c)) && c != '_' && c != '-') break;
        s.push_back(c);
        advance();
      }
      return {Tok::Ident, s, line, column};
    }
    throw LayoutError(std::string("unexpected character '") + ch + "'", line, column);
  }

 private:
  void advance() {
    if (text_[pos_] == '\n') {
      ++line_;
      column_ = 1;
    } else {
      ++column_;
    }
    ++pos_;
  }

  void skip_space() {
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

  Token string_literal(std::size_t line, std::size_t column) {
    advance();
    std::string s;
    while (pos_ < text_.size() && text_[pos_] != '"') {
      if (text_[pos_] == '\n') break;
      if (text_[pos_] == '\\' && pos_ + 1 < text_.size()) {
        advance();
        const char e = text_[pos_];
        s.push_back(e == 't' ? '\t' : e);
      } else {
        s.push_back(text_[pos_]);
      }
      advance();
    }
    if (pos_ >= text_.size() || text_[pos_] != '"') throw LayoutError("unterminated string", line, column);
    advance();
    return {Tok::String, s, line, column};
  }

  std::string_view text_;
  std::size_t pos_ = 0;
  std::size_t line_ = 1;
  std::size_t column_ = 1;
};

class Parser {
 public:
  explicit Parser(std::string_view text) : lexer_(text) { shift(); }

  LayoutSpec parse() {
    LayoutSpec layout;
    bool have_format = false;
    while (cur_.kind != Tok::End) {
      if (cur_.kind == Tok::Semicolon) {
        shift();
        continue;
      }
      const Token key = expect(Tok::Ident);
      if (key.text == "field") {
        layout.fields.push_back(field_block(key));
      } else if (key.text == "absent") {
        expect(Tok::Equals);
        for (;;) {
          layout.absent.push_back(expect(Tok::Ident).text);
          if (cur_.kind != Tok::Comma) break;
          shift();
        }
      } else {
        expect(Tok::Equals);
        const Token value = take_value();
        if (key.text == "format") {
          if (value.text == "fixed")
            layout.format = InputFormat::FixedWidth;
          else if (value.text == "csv")
            layout.format = InputFormat::Csv;
          else
            throw LayoutError("format must be 'fixed' or 'csv'", value.line, value.column);
          have_format = true;
        } else if (key.text == "record_length") {
          layout.record_length = positive(value);
        } else if (key.text == "delimiter") {
          if (value.kind != Tok::String || value.text.size() != 1)
            throw LayoutError("delimiter must be a one-character string", value.line, value.column);
          layout.delimiter = value.text[0];
        } else {
          throw LayoutError("unknown setting '" + key.text + "'", key.line, key.column);
        }
      }
    }
    if (!have_format) throw LayoutError("missing 'format' setting");
    return layout;
  }

 private:
  void shift() { cur_ = lexer_.next(); }

  Token expect(Tok kind) {
    if (cur_.kind != kind)
      throw LayoutError(std::string("expected ") + describe(kind) + ", found " + describe(cur_.kind) +
                            (cur_.text.empty() ? "" : " '" + cur_.text + "'"),
                        cur_.line, cur_.column);
    Token t = cur_;
    shift();
    return t;
  }

  Token take_value() {
    if (cur_.kind != Tok::Ident && cur_.kind != Tok::Number && cur_.kind != Tok::String)
      throw LayoutError(std::string("expected a value, found ") + describe(cur_.kind), cur_.line, cur_.column);
    Token t = cur_;
    shift();
    return t;
  }

  static std::size_t positive(const Token& t) {
    if (t.kind != Tok::Number) throw LayoutError("expected a positive integer", t.line, t.column);
    const auto v = detail::parse_int(t.text);
    if (!v || *v <= 0) throw LayoutError("expected a positive integer", t.line, t.column);
    return static_cast<std::size_t>(*v);
  }

  FieldSpec field_block(const Token& keyword) {
    FieldSpec f;
    f.line = keyword.line;
    f.name = expect(Tok::Ident).text;
    expect(Tok::LBrace);
    std::set<std::string> seen;
    while (cur_.kind != Tok::RBrace) {
      if (cur_.kind == Tok::Semicolon || cur_.kind == Tok::Comma) {
        shift();
        continue;
      }
      const Token key = expect(Tok::Ident);
      if (!seen.insert(key.text).second)
        throw LayoutError("attribute '" + key.text + "' repeated", key.line, key.column);
      expect(Tok::Equals);
      const Token value = take_value();
      if (key.text == "start") {
        f.start = positive(value);
      } else if (key.text == "width") {
        f.width = positive(value);
      } else if (key.text == "column") {
        f.column = value.text;
      } else if (key.text == "kind") {
        if (value.text == "decimal")
          f.kind = FieldKind::Decimal;
        else if (value.text == "integer")
          f.kind = FieldKind::Integer;
        else if (value.text == "code")
          f.kind = FieldKind::Code;
        else
          throw LayoutError("kind must be decimal, integer or code", value.line, value.column);
      } else if (key.text == "scale") {
        const auto s = static_cast<std::int64_t>(positive(value));
        std::int64_t p = 1;
        while (p < s && p <= (std::int64_t{1} << 60)) p *= 10;
        if (p != s) throw LayoutError("scale must be a power of ten", value.line, value.column);
        f.scale = s;
      } else if (key.text == "recode") {
        f.recode = value.text;
      } else {
        throw LayoutError("unknown field attribute '" + key.text + "'", key.line, key.column);
      }
    }
    expect(Tok::RBrace);
    return f;
  }

  Lexer lexer_;
  Token cur_{Tok::End, "", 0, 0};
};

bool is_role(std::string_view name) {
  return std::find(kRequiredRoles.begin(), kRequiredRoles.end(), name) != kRequiredRoles.end() ||
         std::find(kOptionalRoles.begin(), kOptionalRoles.end(), name) != kOptionalRoles.end();
}

void validate(const LayoutSpec& layout) {
  std::set<std::string> names;
  for (const auto& f : layout.fields)
    if (!names.insert(f.name).second) throw LayoutError("duplicate field name '" + f.name + "'", f.line);

  for (const auto& f : layout.fields) {
    const bool numeric_role = f.name == "weight" || f.name == "mpce";
    if (numeric_role && f.kind == FieldKind::Code)
      throw LayoutError("field '" + f.name + "' must be decimal or integer", f.line);
    if (f.name == "age" && f.kind != FieldKind::Integer)
      throw LayoutError("field 'age' must be integer", f.line);
    if (is_role(f.name) && !numeric_role && f.name != "age" && f.kind != FieldKind::Code)
      throw LayoutError("field '" + f.name + "' must be a code", f.line);
    if (f.scale && f.kind == FieldKind::Code)
      throw LayoutError("scale applies only to numeric fields ('" + f.name + "')", f.line);
    if (f.recode && f.kind != FieldKind::Code)
      throw LayoutError("recode applies only to code fields ('" + f.name + "')", f.line);
  }

  if (layout.format == InputFormat::FixedWidth) {
    if (!layout.record_length) throw LayoutError("fixed-width layouts need 'record_length'");
    std::vector<const FieldSpec*> spans;
    for (const auto& f : layout.fields) {
      if (!f.start || !f.width) throw LayoutError("field '" + f.name + "' needs start and width", f.line);
      if (f.column) throw LayoutError("field '" + f.name + "' has a CSV column in a fixed-width layout", f.line);
      if (*f.start + *f.width - 1 > *layout.record_length)
        throw LayoutError("field '" + f.name + "' extends past record_length", f.line);
      spans.push_back(&f);
    }
    std::sort(spans.begin(), spans.end(), [](auto* a, auto* b) { return *a->start < *b->start; });
    for (std::size_t i = 1; i < spans.size(); ++i) {
      const auto* prev = spans[i - 1];
      if (*prev->start + *prev->width > *spans[i]->start)
        throw LayoutError("overlapping spans: '" + prev->name + "' and '" + spans[i]->name + "'",
                          spans[i]->line);
    }
  } else {
    std::set<std::string> columns;
    for (const auto& f : layout.fields) {
      if (!f.column) throw LayoutError("field '" + f.name + "' needs a column", f.line);
      if (f.start || f.width)
        throw LayoutError("field '" + f.name + "' has start/width in a CSV layout", f.line);
      if (!columns.insert(*f.column).second)
        throw LayoutError("column '" + *f.column + "' bound twice", f.line);
    }
  }

  std::set<std::string> absent;
  for (const auto& a : layout.absent) {
    if (!is_role(a)) throw LayoutError("'" + a + "' in absent is not a role");
    if (!absent.insert(a).second) throw LayoutError("role '" + a + "' listed absent twice");
    if (names.contains(a)) throw LayoutError("role '" + a + "' is both bound and absent");
  }
  for (auto role : kRequiredRoles) {
    const std::string r(role);
    if (!names.contains(r) && !absent.contains(r))
      throw LayoutError("missing required role '" + r + "' (bind it or list it under absent)");
  }
}

}  // namespace

LayoutError::LayoutError(const std::string& message, std::size_t line, std::size_t column)
    : std::runtime_error(line ? "line " + std::to_string(line) +
                                    (column ? ", column " + std::to_string(column) : std::string()) + ": " +
                                    message
                              : message),
      line_(line),
      column_(column) {}

const FieldSpec* LayoutSpec::field(std::string_view name) const {
  for (const auto& f : fields)
    if (f.name == name) return &f;
  return nullptr;
}

bool LayoutSpec::is_absent(std::string_view role) const {
  return std::find(absent.begin(), absent.end(), role) != absent.end();
}

std::size_t LayoutSpec::bound_role_count() const {
  return static_cast<std::size_t>(
      std::count_if(fields.begin(), fields.end(), [](const FieldSpec& f) { return is_role(f.name); }));
}

LayoutSpec parse_layout(std::string_view descriptor_text) {
  LayoutSpec layout = Parser(descriptor_text).parse();
  validate(layout);
  return layout;
}

LayoutSpec load_layout(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw LayoutError("cannot open layout " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_layout(buf.str());
}

}  // namespace informality
