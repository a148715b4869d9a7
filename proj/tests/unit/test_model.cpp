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

#include <gtest/gtest.h>

#include <set>

#include "cstudio/errors.hpp"
#include "cstudio/model.hpp"
#include "support.hpp"

namespace cstudio {
namespace {

using testing::make_document;

Document two_sections() {
  return make_document("d", {{"Intro", {"One.", "Two."}, {}}, {"Method", {"Three."}, {}}});
}

TEST(Model, WellFormedDocumentHasNoViolations) {
  EXPECT_TRUE(validate_document(two_sections()).empty());
}

TEST(Model, EmptySectionTitleIsNamed) {
  Document d = two_sections();
  d.sections[0].title = "";
  auto v = validate_document(d);
  ASSERT_EQ(v.size(), 1u);
  EXPECT_EQ(v[0].field, "Section.title");
}

TEST(Model, UntrimmedTitleIsAViolation) {
  Document d = two_sections();
  d.sections[1].title = " Method";
  auto v = validate_document(d);
  ASSERT_FALSE(v.empty());
  EXPECT_EQ(v[0].field, "Section.title");
}

TEST(Model, BrokenNextLinkIsOneLinkageViolation) {
  Document d = make_document("d", {{"S", {"s1.", "s2.", "s3.", "s4.", "s5."}, {}}});
  // sentence 3 (index 2) now disagrees with sentence 4's text
  d.sections[0].sentences[2].next_text = "something else.";
  auto v = validate_document(d);
  ASSERT_EQ(v.size(), 1u);
  EXPECT_EQ(v[0].field, "SentenceRecord.next_text");
  EXPECT_EQ(v[0].rule, "linkage");
  // oracle: re-walk the section and find the single mismatch
  const auto& ss = d.sections[0].sentences;
  int mismatches = 0;
  for (std::size_t i = 0; i + 1 < ss.size(); ++i)
    if (ss[i].next_text != ss[i + 1].text) ++mismatches;
  EXPECT_EQ(mismatches, 1);
}

TEST(Model, SubsectionLevelMustBeParentPlusOne) {
  Document d = make_document("d", {{"A", {"x."}, {{"B", {"y."}, {}}}}});
  EXPECT_TRUE(validate_document(d).empty());
  d.sections[0].subsections[0].level = 3;
  auto v = validate_document(d);
  ASSERT_FALSE(v.empty());
  EXPECT_EQ(v[0].field, "Section.level");
}

TEST(Model, CitationMarkerMustOccurInText) {
  Document d = two_sections();
  d.sections[0].sentences[0].citations.push_back({"[9]", "", ""});
  auto v = validate_document(d);
  ASSERT_EQ(v.size(), 1u);
  EXPECT_EQ(v[0].field, "CitationRef.marker");
}

TEST(Model, DocumentWithoutSectionsIsInvalid) {
  Document d;
  d.doc_id = "x";
  d.title = "t";
  auto v = validate_document(d);
  ASSERT_EQ(v.size(), 1u);
  EXPECT_EQ(v[0].field, "Document.sections");
}

TEST(Model, CorpusRejectsDuplicateDocIds) {
  auto v = validate_corpus({two_sections(), two_sections()});
  ASSERT_FALSE(v.empty());
  EXPECT_EQ(v[0].rule, "unique_in_corpus");
}

TEST(Model, SentenceIdsUsePreorderSectionIndex) {
  Document d = make_document("p", {{"A", {"a0."}, {{"B", {"b0.", "b1."}, {}}}}, {"C", {"c0."}, {}}});
  EXPECT_EQ(d.sections[0].sentences[0].sentence_id, "p#0#0");
  EXPECT_EQ(d.sections[0].subsections[0].sentences[1].sentence_id, "p#1#1");
  EXPECT_EQ(d.sections[1].sentences[0].sentence_id, "p#2#0");
  EXPECT_EQ(d.sections[0].subsections[0].sentences[0].section_path,
            (std::vector<std::string>{"A", "B"}));
}

TEST(Model, CorpusSentencesAreExactlyTheSectionLists) {
  auto docs = testing::synthetic_corpus(5, 120, 3);
  std::multiset<std::string> expected;
  for (const auto& d : docs)
    for (const Section* s : sections_preorder(d))
      for (const auto& r : s->sentences) expected.insert(r.sentence_id);
  Corpus c(std::move(docs));
  std::multiset<std::string> got;
  for (const auto* r : c.sentences()) got.insert(r->sentence_id);
  EXPECT_EQ(got, expected);
  EXPECT_EQ(std::set<std::string>(got.begin(), got.end()).size(), got.size());
}

TEST(Model, PrevNextLinkageIsAnInvolution) {
  Corpus c(testing::synthetic_corpus(4, 80, 11));
  for (const auto* r : c.sentences()) {
    if (!r->prev_text || !r->next_text) continue;
    const Section* owner = nullptr;
    for (const auto& d : c.documents())
      for (const Section* s : sections_preorder(d))
        for (const auto& x : s->sentences)
          if (x.sentence_id == r->sentence_id) owner = s;
    ASSERT_NE(owner, nullptr);
    const auto i = r->index_in_section;
    EXPECT_EQ(owner->sentences[i - 1].next_text, r->text);
    EXPECT_EQ(owner->sentences[i + 1].prev_text, r->text);
  }
}

TEST(Model, SuccessorStaysInTopLevelSectionAndCrossesSubsections) {
  Corpus c({make_document("p", {{"A", {"a0.", "a1."}, {{"B", {"b0."}, {}}}}, {"C", {"c0."}, {}}})});
  EXPECT_EQ(c.successor("p#0#0", 0)->sentence_id, "p#0#0");
  EXPECT_EQ(c.successor("p#0#1", 1)->sentence_id, "p#1#0");
  EXPECT_EQ(c.successor("p#0#0", 3), nullptr);
  EXPECT_EQ(c.successor("p#1#0", 1), nullptr);
  EXPECT_EQ(c.find("nope"), nullptr);
}

TEST(Model, EngineConfigDefaultsAndValidation) {
  EngineConfig e;
  EXPECT_EQ(e.k_results, 25u);
  EXPECT_EQ(e.n_titles_clustered, 1000u);
  EXPECT_EQ(e.n_colors, 20u);
  EXPECT_DOUBLE_EQ(e.pdc_alpha, 0.7);
  EXPECT_DOUBLE_EQ(e.pdc_cut, 0.35);
  EXPECT_EQ(e.embedding_dim, 256u);
  EXPECT_NO_THROW(e.validate());
  e.k_results = 0;
  EXPECT_THROW(e.validate(), Error);
  e = {};
  e.embedding_dim = 4;
  EXPECT_THROW(e.validate(), Error);
  e = {};
  e.pdc_alpha = 1.5;
  EXPECT_THROW(e.validate(), Error);
}

}  // namespace
}  // namespace cstudio
