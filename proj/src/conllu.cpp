#include "udsim/conllu.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

namespace udsim {

const char* to_string(ConlluErrorKind kind) {
  switch (kind) {
    case ConlluErrorKind::MalformedLine: return "MalformedLine";
    case ConlluErrorKind::CycleDetected: return "CycleDetected";
    case ConlluErrorKind::MultipleRoots: return "MultipleRoots";
    case ConlluErrorKind::NoRoot: return "NoRoot";
    case ConlluErrorKind::DanglingHead: return "DanglingHead";
  }
  return "Unknown";
}

namespace {

bool has_forbidden_chars(std::string_view s) {
  return s.find_first_of("\t\n\r") != std::string_view::npos;
}

std::optional<int> parse_int(std::string_view s) {
  int value = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
  if (ec != std::errc{} || ptr != s.data() + s.size()) return std::nullopt;
  return value;
}

std::vector<std::string_view> split_tabs(std::string_view line) {
  std::vector<std::string_view> cols;
  std::size_t start = 0;
  while (true) {
    auto pos = line.find('\t', start);
    if (pos == std::string_view::npos) {
      cols.push_back(line.substr(start));
      break;
    }
    cols.push_back(line.substr(start, pos - start));
    start = pos + 1;
  }
  return cols;
}

std::string_view trim(std::string_view s) {
  auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

// "# key = value" -> value when the key matches.
std::optional<std::string> comment_value(std::string_view line, std::string_view key) {
  auto body = trim(line.substr(1));
  if (body.substr(0, key.size()) != key) return std::nullopt;
  auto rest = trim(body.substr(key.size()));
  if (rest.empty() || rest.front() != '=') return std::nullopt;
  return std::string(trim(rest.substr(1)));
}

}  // namespace

std::optional<TreeDefect> find_defect(std::span<const Token> tokens) {
  const auto n = tokens.size();
  if (n == 0) return TreeDefect{ConlluErrorKind::NoRoot, 0, "sentence has no tokens"};

  for (std::size_t i = 0; i < n; ++i) {
    const Token& t = tokens[i];
    if (t.id != static_cast<int>(i + 1))
      return TreeDefect{ConlluErrorKind::MalformedLine, i,
                        "token id " + std::to_string(t.id) + " out of sequence, expected " +
                            std::to_string(i + 1)};
    if (t.form.empty() || t.deprel.empty() || t.lemma.empty() || t.upos.empty())
      return TreeDefect{ConlluErrorKind::MalformedLine, i, "empty field"};
    if (has_forbidden_chars(t.form) || has_forbidden_chars(t.lemma) ||
        has_forbidden_chars(t.upos) || has_forbidden_chars(t.deprel))
      return TreeDefect{ConlluErrorKind::MalformedLine, i, "field contains tab or newline"};
  }

  std::optional<std::size_t> root;
  for (std::size_t i = 0; i < n; ++i) {
    const Token& t = tokens[i];
    if (t.head < 0 || t.head > static_cast<int>(n))
      return TreeDefect{ConlluErrorKind::DanglingHead, i,
                        "head " + std::to_string(t.head) + " of token " + std::to_string(t.id) +
                            " refers to no token"};
    if (t.head == t.id)
      return TreeDefect{ConlluErrorKind::CycleDetected, i,
                        "token " + std::to_string(t.id) + " is its own head"};
    if (t.head == 0) {
      if (root)
        return TreeDefect{ConlluErrorKind::MultipleRoots, i,
                          "tokens " + std::to_string(*root + 1) + " and " +
                              std::to_string(t.id) + " both have head 0"};
      root = i;
    }
  }

  // Walk up from every token; with exactly one root and in-range heads the
  // only failure mode left is a cycle that never reaches it.
  std::vector<char> state(n, 0);  // 0 unseen, 1 on current path, 2 reaches root
  for (std::size_t i = 0; i < n; ++i) {
    std::vector<std::size_t> path;
    std::size_t cur = i;
    while (true) {
      if (state[cur] == 2) break;
      if (state[cur] == 1)
        return TreeDefect{ConlluErrorKind::CycleDetected, cur,
                          "head chain through token " + std::to_string(cur + 1) +
                              " forms a cycle"};
      state[cur] = 1;
      path.push_back(cur);
      int h = tokens[cur].head;
      if (h == 0) break;
      cur = static_cast<std::size_t>(h - 1);
    }
    for (auto p : path) state[p] = 2;
  }

  if (!root) return TreeDefect{ConlluErrorKind::NoRoot, 0, "no token has head 0"};
  return std::nullopt;
}

DepTree::DepTree(std::string sent_id, std::string language, std::vector<Token> tokens)
    : sent_id_(std::move(sent_id)), language_(std::move(language)), tokens_(std::move(tokens)) {
  if (auto defect = find_defect(tokens_))
    throw ConlluError(defect->kind, defect->message, 0, sent_id_);
  children_.resize(tokens_.size());
  for (const Token& t : tokens_) {
    if (t.head == 0)
      root_id_ = t.id;
    else
      children_[static_cast<std::size_t>(t.head - 1)].push_back(t.id);
  }
}

DepTree DepTree::with_sent_id(std::string sent_id) const {
  DepTree copy = *this;
  copy.sent_id_ = std::move(sent_id);
  return copy;
}

std::string strip_deprel_subtype(std::string_view deprel) {
  auto pos = deprel.find(':');
  return std::string(pos == std::string_view::npos ? deprel : deprel.substr(0, pos));
}

namespace {

struct Block {
  std::size_t ordinal = 0;
  std::string sent_id;
  std::string language;
  std::vector<Token> tokens;
  std::vector<std::size_t> lines;  // input line of each token
};

DepTree finish_block(Block& block, const ConlluOptions& options) {
  if (auto defect = find_defect(block.tokens)) {
    std::size_t line = block.lines.empty() ? 0 : block.lines.at(defect->position);
    throw ConlluError(defect->kind,
                      "sentence " + std::to_string(block.ordinal) +
                          (block.sent_id.empty() ? "" : " (" + block.sent_id + ")") + ", line " +
                          std::to_string(line) + ": " + defect->message,
                      block.ordinal, block.sent_id, line);
  }
  std::string lang = block.language.empty() ? options.default_language : block.language;
  return DepTree(std::move(block.sent_id), std::move(lang), std::move(block.tokens));
}

}  // namespace

std::vector<DepTree> parse_conllu(std::string_view text, const ConlluOptions& options) {
  std::vector<DepTree> out;
  std::optional<Block> block;
  std::size_t ordinal = 0;
  std::size_t line_no = 0;

  auto malformed = [&](const std::string& msg) {
    const std::string sid = block ? block->sent_id : std::string{};
    throw ConlluError(ConlluErrorKind::MalformedLine,
                      "sentence " + std::to_string(ordinal) + (sid.empty() ? "" : " (" + sid + ")") +
                          ", line " + std::to_string(line_no) + ": " + msg,
                      ordinal, sid, line_no);
  };

  std::size_t pos = 0;
  while (pos <= text.size()) {
    auto nl = text.find('\n', pos);
    bool last = nl == std::string_view::npos;
    std::string_view raw = text.substr(pos, last ? std::string_view::npos : nl - pos);
    pos = last ? text.size() + 1 : nl + 1;
    ++line_no;
    if (!raw.empty() && raw.back() == '\r') raw.remove_suffix(1);

    if (trim(raw).empty()) {
      // Comment-only blocks emit nothing.
      if (block && !block->tokens.empty()) out.push_back(finish_block(*block, options));
      block.reset();
      continue;
    }

    if (!block) {
      block.emplace();
      block->ordinal = ++ordinal;
    }

    if (raw.front() == '#') {
      if (auto v = comment_value(raw, "sent_id")) block->sent_id = *v;
      else if (auto l = comment_value(raw, "lang")) block->language = *l;
      continue;
    }

    auto cols = split_tabs(raw);
    if (cols.size() != 10)
      malformed("expected 10 tab-separated columns, found " + std::to_string(cols.size()));

    std::string_view id_col = cols[0];
    if (id_col.find('-') != std::string_view::npos || id_col.find('.') != std::string_view::npos)
      continue;

    auto id = parse_int(id_col);
    if (!id || *id < 1) malformed("invalid token id '" + std::string(id_col) + "'");
    auto head = parse_int(cols[6]);
    if (!head || *head < 0) malformed("invalid head '" + std::string(cols[6]) + "'");
    for (int c : {1, 2, 3, 7})
      if (cols[static_cast<std::size_t>(c)].empty()) malformed("empty column " + std::to_string(c + 1));

    Token tok;
    tok.id = *id;
    tok.form = std::string(cols[1]);
    tok.lemma = std::string(cols[2]);
    tok.upos = std::string(cols[3]);
    tok.head = *head;
    tok.deprel = options.strip_deprel_subtypes ? strip_deprel_subtype(cols[7]) : std::string(cols[7]);
    block->tokens.push_back(std::move(tok));
    block->lines.push_back(line_no);
  }
  if (block && !block->tokens.empty()) out.push_back(finish_block(*block, options));
  return out;
}

std::vector<DepTree> read_conllu_file(const std::filesystem::path& path,
                                      const ConlluOptions& options) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_conllu(ss.str(), options);
}

std::string serialize_conllu(const DepTree& tree) {
  std::string out;
  if (!tree.sent_id().empty()) out += "# sent_id = " + tree.sent_id() + "\n";
  if (!tree.language().empty()) out += "# lang = " + tree.language() + "\n";
  for (const Token& t : tree.tokens()) {
    out += std::to_string(t.id);
    out += '\t' + t.form + '\t' + t.lemma + '\t' + t.upos + "\t_\t_\t";
    out += std::to_string(t.head);
    out += '\t' + t.deprel + "\t_\t_\n";
  }
  out += '\n';
  return out;
}

std::string serialize_conllu(std::span<const DepTree> trees) {
  std::string out;
  for (const auto& t : trees) out += serialize_conllu(t);
  return out;
}

}  // namespace udsim
