// Copyright 2026 The Corpus Studio Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "cstudio/ingest.hpp"

#include <algorithm>
#include <fstream>
#include <future>
#include <regex>
#include <sstream>

#include "cstudio/errors.hpp"
#include "cstudio/resources.hpp"
#include "cstudio/serialize.hpp"
#include "cstudio/text.hpp"

namespace cstudio {

SourceFormat detect_format(const std::filesystem::path& path) {
  const auto ext = path.extension().string();
  return (ext == ".jsonl" || ext == ".ndjson") ? SourceFormat::kJsonl : SourceFormat::kMarkdown;
}

// ---------------------------------------------------------------------------
// Segmentation

const std::vector<std::string>& protected_abbreviations() {
  static const std::vector<std::string> kList = text::parse_word_list(resources::abbreviations_v1());
  return kList;
}

namespace {

char ascii_lower(char c) { return (c >= 'A' && c <= 'Z') ? static_cast<char>(c - 'A' + 'a') : c; }

bool iequals_suffix(std::string_view s, std::string_view suffix) {
  if (suffix.size() > s.size()) return false;
  const auto tail = s.substr(s.size() - suffix.size());
  for (std::size_t i = 0; i < suffix.size(); ++i) {
    if (ascii_lower(tail[i]) != ascii_lower(suffix[i])) return false;
  }
  return true;
}

// True if the period at s[dot] closes a protected abbreviation.
bool is_protected_period(std::string_view s, std::size_t dot) {
  const std::string_view head = s.substr(0, dot + 1);
  for (const auto& abbr : protected_abbreviations()) {
    if (!iequals_suffix(head, abbr)) continue;
    const std::size_t start = head.size() - abbr.size();
    if (start == 0 || !text::is_word_byte(static_cast<unsigned char>(head[start - 1]))) {
      return true;
    }
  }
  return false;
}

bool is_closer(char c) { return c == '"' || c == '\'' || c == ')' || c == ']'; }

bool starts_sentence(std::string_view s, std::size_t i) {
  if (i >= s.size()) return false;
  char c = s[i];
  if ((c == '"' || c == '(' || c == '[' || c == '\'') && i + 1 < s.size()) c = s[i + 1];
  return (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9');
}

std::vector<std::string> rule_segment(std::string_view raw) {
  const std::string s = text::collapse_whitespace(raw);
  std::vector<std::string> out;
  std::size_t start = 0;
  for (std::size_t i = 0; i < s.size(); ++i) {
    const char c = s[i];
    if (c != '.' && c != '!' && c != '?') continue;
    std::size_t j = i + 1;
    while (j < s.size() && is_closer(s[j])) ++j;
    if (j >= s.size() || s[j] != ' ' || !starts_sentence(s, j + 1)) continue;
    if (c == '.' && is_protected_period(s, i)) continue;
    out.push_back(s.substr(start, j - start));
    start = j + 1;
    i = j;
  }
  if (start < s.size()) out.push_back(s.substr(start));
  return out;
}

std::string non_whitespace(std::string_view s) {
  std::string out;
  for (char c : s) {
    if (!text::is_blank(std::string_view(&c, 1))) out.push_back(c);
  }
  return out;
}

}  // namespace

Segmenter rule_based_segmenter() { return Segmenter{"rule-v1", rule_segment}; }

std::vector<std::string> segment_paragraph(std::string_view text, const Segmenter& seg) {
  if (text::is_blank(text))
    throw Error(ErrorCode::kInvalidArgument, "segment_paragraph: empty paragraph");
  auto sentences = seg.segment(text);
  std::string joined;
  for (auto& s : sentences) {
    s = text::trim(s);
    if (s.empty())
      throw Error(ErrorCode::kInternal, "segmenter '" + seg.name + "' produced an empty sentence");
    joined += s;
  }
  if (non_whitespace(joined) != non_whitespace(text))
    throw Error(ErrorCode::kInternal,
                "segmenter '" + seg.name + "' did not preserve paragraph content");
  return sentences;
}

// ---------------------------------------------------------------------------
// Citations

std::vector<CitationRef> extract_citations(std::string_view sentence, const Bibliography& bib) {
  static const std::regex kNumeric(R"(\[\d+(?:,\s*\d+)*\])");
  static const std::regex kAuthorYear(R"(\([A-Z][^(),\d]*,\s*\d{4}[a-z]?\))");

  std::vector<std::pair<std::size_t, std::string>> found;
  const std::string s(sentence);
  for (const auto* re : {&kNumeric, &kAuthorYear}) {
    for (auto it = std::sregex_iterator(s.begin(), s.end(), *re); it != std::sregex_iterator();
         ++it) {
      found.emplace_back(static_cast<std::size_t>(it->position()), it->str());
    }
  }
  std::sort(found.begin(), found.end());

  std::vector<CitationRef> out;
  for (const auto& [pos, marker] : found) {
    if (std::any_of(out.begin(), out.end(), [&](const auto& c) { return c.marker == marker; }))
      continue;
    CitationRef ref{marker, "", ""};
    if (auto it = bib.find(marker); it != bib.end()) {
      ref.authors = it->second.authors;
      ref.cited_title = it->second.cited_title;
    } else if (marker.front() == '[') {
      // "[3, 7]" resolves component-wise when only "[3]" and "[7]" are listed.
      std::vector<std::string> authors, titles;
      static const std::regex kNum(R"(\d+)");
      for (auto it = std::sregex_iterator(marker.begin(), marker.end(), kNum);
           it != std::sregex_iterator(); ++it) {
        if (auto b = bib.find("[" + it->str() + "]"); b != bib.end()) {
          authors.push_back(b->second.authors);
          titles.push_back(b->second.cited_title);
        }
      }
      auto join = [](const std::vector<std::string>& v) {
        std::string r;
        for (const auto& x : v) r += (r.empty() ? "" : "; ") + x;
        return r;
      };
      ref.authors = join(authors);
      ref.cited_title = join(titles);
    }
    out.push_back(std::move(ref));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Metadata

namespace {

void attach_section(Section& s, int level, const std::string& doc_id,
                    std::vector<std::string>& path, std::size_t& section_idx,
                    const Bibliography& bib) {
  s.level = level;
  path.push_back(s.title);
  const std::size_t my_idx = section_idx++;
  for (std::size_t i = 0; i < s.sentences.size(); ++i) {
    auto& r = s.sentences[i];
    r.sentence_id = make_sentence_id(doc_id, my_idx, i);
    r.doc_id = doc_id;
    r.section_path = path;
    r.index_in_section = i;
    r.prev_text = i == 0 ? std::nullopt : std::optional<std::string>(s.sentences[i - 1].text);
    r.next_text = i + 1 == s.sentences.size()
                      ? std::nullopt
                      : std::optional<std::string>(s.sentences[i + 1].text);
    if (r.citations.empty()) r.citations = extract_citations(r.text, bib);
  }
  for (auto& sub : s.subsections) attach_section(sub, level + 1, doc_id, path, section_idx, bib);
  path.pop_back();
}

}  // namespace

void attach_sentence_metadata(Document& doc, const Bibliography& bib) {
  std::vector<std::string> path;
  std::size_t section_idx = 0;
  for (auto& s : doc.sections) attach_section(s, 1, doc.doc_id, path, section_idx, bib);
}

std::vector<SentenceRecord> build_sentence_records(const Document& doc, const Bibliography& bib) {
  Document copy = doc;
  attach_sentence_metadata(copy, bib);
  std::vector<SentenceRecord> out;
  for (const Section* s : sections_preorder(copy)) {
    out.insert(out.end(), s->sentences.begin(), s->sentences.end());
  }
  return out;
}

// ---------------------------------------------------------------------------
// Markdown-like format

namespace {

constexpr std::string_view kBibliographyMarker = "%% bibliography";
constexpr int kMaxHeadingLevel = 4;

[[noreturn]] void parse_fail(const std::string& source, std::size_t line, const std::string& msg) {
  throw Error(ErrorCode::kParse, source + ":" + std::to_string(line) + ": " + msg);
}

std::string normalize_bib_key(std::string key) {
  if (!key.empty() && std::all_of(key.begin(), key.end(), [](char c) { return c >= '0' && c <= '9'; }))
    return "[" + key + "]";
  return key;
}

class MarkdownParser {
 public:
  MarkdownParser(const std::string& source, const Segmenter& seg) : source_(source), seg_(seg) {
    doc_.doc_id = std::filesystem::path(source).stem().string();
    doc_.title = doc_.doc_id;
  }

  Document run(std::string_view content) {
    std::size_t line_no = 0;
    std::size_t pos = 0;
    while (pos < content.size()) {
      std::size_t nl = content.find('\n', pos);
      if (nl == std::string_view::npos) nl = content.size();
      std::string_view line = content.substr(pos, nl - pos);
      if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
      ++line_no;
      handle_line(line, line_no);
      pos = nl + 1;
    }
    flush_paragraph();
    if (doc_.sections.empty()) parse_fail(source_, line_no, "no sections");
    attach_sentence_metadata(doc_, bib_);
    return std::move(doc_);
  }

 private:
  void handle_line(std::string_view line, std::size_t line_no) {
    if (in_bibliography_) {
      if (text::is_blank(line)) return;
      std::vector<std::string> fields;
      std::size_t start = 0;
      for (;;) {
        const std::size_t tab = line.find('\t', start);
        fields.emplace_back(line.substr(start, tab == std::string_view::npos ? tab : tab - start));
        if (tab == std::string_view::npos) break;
        start = tab + 1;
      }
      if (fields.size() != 3)
        parse_fail(source_, line_no, "bibliography line needs marker<TAB>authors<TAB>title");
      const std::string key = normalize_bib_key(text::trim(fields[0]));
      bib_[key] = CitationRef{key, text::trim(fields[1]), text::trim(fields[2])};
      return;
    }
    if (text::trim(line) == kBibliographyMarker) {
      flush_paragraph();
      in_bibliography_ = true;
      return;
    }
    if (line.starts_with("%%")) {
      flush_paragraph();
      if (stack_.empty()) handle_metadata(line.substr(2), line_no);
      return;  // comment inside the body
    }
    if (line.starts_with("#")) {
      std::size_t hashes = 0;
      while (hashes < line.size() && line[hashes] == '#') ++hashes;
      if (hashes == line.size() || line[hashes] == ' ' || line[hashes] == '\t') {
        handle_heading(static_cast<int>(hashes), text::trim(line.substr(hashes)), line_no);
        return;
      }
    }
    if (text::is_blank(line)) {
      flush_paragraph();
      return;
    }
    if (stack_.empty()) parse_fail(source_, line_no, "text before the first heading");
    if (paragraph_.empty()) {
      paragraph_line_ = line_no;
      if (line.starts_with("\\")) line.remove_prefix(1);
    }
    paragraph_ += std::string(line);
    paragraph_ += '\n';
  }

  void handle_metadata(std::string_view body, std::size_t line_no) {
    const std::size_t colon = body.find(':');
    if (colon == std::string_view::npos) return;
    const std::string key = text::trim(body.substr(0, colon));
    const std::string value = text::trim(body.substr(colon + 1));
    if (key == "id") {
      doc_.doc_id = value;
    } else if (key == "title") {
      doc_.title = value;
    } else if (key == "venue") {
      doc_.venue = value;
    } else if (key == "url") {
      doc_.url = value;
    } else if (key == "year") {
      try {
        doc_.year = std::stoi(value);
      } catch (const std::exception&) {
        parse_fail(source_, line_no, "year is not an integer: " + value);
      }
    }
  }

  void handle_heading(int level, std::string title, std::size_t line_no) {
    flush_paragraph();
    if (level > kMaxHeadingLevel)
      parse_fail(source_, line_no, "heading deeper than level " + std::to_string(kMaxHeadingLevel));
    if (title.empty()) parse_fail(source_, line_no, "empty section title");
    if (level > static_cast<int>(stack_.size()) + 1)
      parse_fail(source_, line_no,
                 "heading level jumps from " + std::to_string(stack_.size()) + " to " +
                     std::to_string(level));
    stack_.resize(static_cast<std::size_t>(level - 1));
    auto& siblings = stack_.empty() ? doc_.sections : stack_.back()->subsections;
    siblings.push_back(Section{std::move(title), level, {}, {}});
    stack_.push_back(&siblings.back());
  }

  void flush_paragraph() {
    if (paragraph_.empty()) return;
    std::vector<std::string> sentences;
    try {
      sentences = segment_paragraph(paragraph_, seg_);
    } catch (const Error& e) {
      parse_fail(source_, paragraph_line_, e.what());
    }
    for (auto& s : sentences) {
      SentenceRecord r;
      r.text = std::move(s);
      stack_.back()->sentences.push_back(std::move(r));
    }
    paragraph_.clear();
  }

  const std::string& source_;
  const Segmenter& seg_;
  Document doc_;
  Bibliography bib_;
  std::vector<Section*> stack_;
  std::string paragraph_;
  std::size_t paragraph_line_ = 0;
  bool in_bibliography_ = false;
};

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIo, "cannot read file: " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  if (in.bad()) throw Error(ErrorCode::kIo, "error reading file: " + path.string());
  return ss.str();
}

void fix_levels(Section& s, int level) {
  s.level = level;
  for (auto& sub : s.subsections) fix_levels(sub, level + 1);
}

void write_section(std::ostringstream& out, const Section& s, int level) {
  out << std::string(static_cast<std::size_t>(level), '#') << ' ' << s.title << "\n\n";
  for (const auto& r : s.sentences) {
    if (r.text.starts_with("#") || r.text.starts_with("%%") || r.text.starts_with("\\")) out << '\\';
    out << r.text << "\n\n";
  }
  for (const auto& sub : s.subsections) write_section(out, sub, level + 1);
}

}  // namespace

Document parse_markdown(std::string_view content, const std::string& source_name,
                        const Segmenter& seg) {
  return MarkdownParser(source_name, seg).run(content);
}

std::vector<Document> parse_jsonl(std::string_view content, const std::string& source_name) {
  std::vector<Document> out;
  std::size_t pos = 0;
  std::size_t line_no = 0;
  while (pos < content.size()) {
    std::size_t nl = content.find('\n', pos);
    if (nl == std::string_view::npos) nl = content.size();
    const auto line = content.substr(pos, nl - pos);
    ++line_no;
    pos = nl + 1;
    if (text::is_blank(line)) continue;
    Document doc;
    try {
      doc = json::parse(line).get<Document>();
    } catch (const json::exception& e) {
      parse_fail(source_name, line_no, std::string("invalid document: ") + e.what());
    }
    for (auto& s : doc.sections) fix_levels(s, 1);
    attach_sentence_metadata(doc);
    if (auto v = validate_document(doc); !v.empty())
      parse_fail(source_name, line_no, "invalid document: " + v.front().field + " (" +
                                           v.front().rule + ") at " + v.front().where);
    out.push_back(std::move(doc));
  }
  if (out.empty()) parse_fail(source_name, line_no, "no documents");
  return out;
}

std::vector<Document> parse_corpus(const std::vector<CorpusSourceFile>& files,
                                   const Segmenter& seg) {
  std::vector<std::future<std::vector<Document>>> pending;
  pending.reserve(files.size());
  for (const auto& f : files) {
    pending.push_back(std::async(std::launch::async, [&f, &seg] {
      const std::string content = read_file(f.path);
      if (f.format == SourceFormat::kJsonl) return parse_jsonl(content, f.path.string());
      return std::vector<Document>{parse_markdown(content, f.path.string(), seg)};
    }));
  }
  std::vector<Document> out;
  for (auto& p : pending) {
    auto docs = p.get();
    for (auto& d : docs) out.push_back(std::move(d));
  }
  if (auto v = validate_corpus(out); !v.empty()) {
    throw Error(ErrorCode::kParse, "invalid corpus: " + v.front().field + " (" + v.front().rule +
                                       ") at " + v.front().where);
  }
  return out;
}

std::string to_markdown(const Document& doc) {
  std::ostringstream out;
  out << "%% id: " << doc.doc_id << '\n';
  out << "%% title: " << doc.title << '\n';
  if (!doc.venue.empty()) out << "%% venue: " << doc.venue << '\n';
  if (doc.year != 0) out << "%% year: " << doc.year << '\n';
  if (doc.url) out << "%% url: " << *doc.url << '\n';
  out << '\n';
  for (const auto& s : doc.sections) write_section(out, s, 1);

  std::map<std::string, CitationRef> bib;
  for (const Section* s : sections_preorder(doc)) {
    for (const auto& r : s->sentences) {
      for (const auto& c : r.citations) {
        if (!c.authors.empty() || !c.cited_title.empty()) bib.emplace(c.marker, c);
      }
    }
  }
  if (!bib.empty()) {
    out << kBibliographyMarker << '\n';
    for (const auto& [marker, c] : bib) out << marker << '\t' << c.authors << '\t' << c.cited_title << '\n';
  }
  return out.str();
}

std::string to_jsonl(const std::vector<Document>& docs) {
  std::string out;
  for (const auto& d : docs) {
    out += json(d).dump();
    out += '\n';
  }
  return out;
}

}  // namespace cstudio
