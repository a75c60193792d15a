#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>

#include "support.hpp"

using namespace promc;
using io::json;

namespace {

json load(const std::string& rel) {
  std::ifstream in(std::string(PROMC_SOURCE_DIR) + "/" + rel);
  return json::parse(in);
}

// Parses and returns the error, failing the test if parsing succeeds.
template <ModelCategory M>
Error parse_error(const json& j) {
  try {
    io::parse_document<M>(j);
  } catch (const Error& e) {
    return e;
  }
  ADD_FAILURE() << "document parsed";
  return Error(ErrorKind::unsupported_regime, "no error");
}

json collapse_doc() { return load("samples/collapse.json"); }

template <ModelCategory M>
void expect_round_trip(const ProMap<M>& f) {
  io::Writer<M> w(f.target().index().is_omega() ? f.target().index().depth() : default_depth);
  const auto name = w.map("f", f);
  const auto text = w.document().dump();
  const auto doc = io::parse_document<M>(json::parse(text));
  const auto& g = doc.map(name);
  EXPECT_TRUE(same_pro_object(g.source(), f.source()));
  EXPECT_TRUE(same_pro_object(g.target(), f.target()));
  EXPECT_TRUE(pro_equal(g, f));
  EXPECT_EQ(g.is_level(), f.is_level());
}

}  // namespace

TEST(Serialize, SamplesParse) {
  std::size_t parsed = 0;
  for (const auto& e : std::filesystem::directory_iterator(std::string(PROMC_SOURCE_DIR) + "/samples")) {
    std::ifstream in(e.path());
    const auto j = json::parse(in);
    if (io::instance_tag(j) == "set-bij")
      EXPECT_NO_THROW(io::parse_document<SetBij>(j)) << e.path();
    else
      EXPECT_NO_THROW(io::parse_document<ChainF2>(j)) << e.path();
    ++parsed;
  }
  EXPECT_GE(parsed, 5u);
}

TEST(Serialize, CollapseSampleContents) {
  const auto doc = io::parse_document<SetBij>(collapse_doc());
  const auto& f = doc.map("f");
  EXPECT_TRUE(f.is_level());
  EXPECT_EQ(f.source().value(1).elements, (std::vector<std::string>{"a", "b"}));
  EXPECT_EQ(f.level_component(1).image, (std::vector<std::size_t>{0, 0}));
  EXPECT_EQ(doc.depth, default_depth);
}

TEST(Serialize, TowerValuesRepeatTheLastEntry) {
  const auto doc = io::parse_document<SetBij>(load("samples/tower.json"), 5);
  const auto& y = doc.object("Y");
  EXPECT_EQ(y.index().depth(), 5u);
  EXPECT_EQ(y.value(4).size(), 2u);
  EXPECT_TRUE(SetBij::equal(y.structure(4, 3), SetBij::identity(y.value(3))));
  EXPECT_EQ(doc.base_object("A").size(), 1u);
}

TEST(Serialize, RandomSetMapsRoundTrip) {
  gen::Rng rng(71);
  const gen::Params prm{5, 3, 2, 1};
  for (int trial = 0; trial < 100; ++trial) {
    const auto f = gen::Gen<SetBij>::level_map(rng, gen::random_index(rng, prm.max_index), prm);
    expect_round_trip(f);
    expect_round_trip(gen::Gen<SetBij>::pro_iso_from(rng, f.source(), prm));
  }
}

TEST(Serialize, RandomChainMapsRoundTrip) {
  gen::Rng rng(73);
  const gen::Params prm{4, 3, 3, 2};
  for (int trial = 0; trial < 60; ++trial)
    expect_round_trip(gen::Gen<ChainF2>::level_map(rng, gen::random_index(rng, prm.max_index), prm));
}

TEST(Serialize, TowersRoundTripToTheirDepth) {
  const FinSet s{{"p", "q", "r"}};
  const auto y = ProObject<SetBij>::tower(
      IndexPoset::omega(6), [s](std::size_t) { return s; }, [s](std::size_t) { return FinMap{s, s, {1, 1, 2}}; });
  expect_round_trip(ProMap<SetBij>::identity(y));
}

TEST(Serialize, WitnessesRoundTrip) {
  gen::Rng rng(79);
  const auto pc = gen::pro_iso_case<SetBij>(rng, {});
  io::Writer<SetBij> w;
  const auto name = w.map("f", pc.f);
  w.witnesses("h", name, pc.f, pc.witnesses);
  const auto doc = io::parse_document<SetBij>(json::parse(w.document().dump()));
  const auto back = doc.witnesses_for(name);
  ASSERT_TRUE(back);
  ASSERT_EQ(back->size(), pc.witnesses.size());
  for (const auto& [k, h] : pc.witnesses) EXPECT_TRUE(SetBij::equal(back->at(k), h));
}

TEST(Serialize, WriterReusesNamesForIdenticalObjects) {
  const auto doc = io::parse_document<SetBij>(collapse_doc());
  io::Writer<SetBij> w;
  const auto& x = doc.object("X");
  EXPECT_EQ(w.object("first", x), "first");
  EXPECT_EQ(w.object("second", x), "first");
  w.map("g", ProMap<SetBij>::identity(x));
  w.map("g", ProMap<SetBij>::identity(x));
  EXPECT_TRUE(w.document()["maps"].contains("g#2"));
}

// ---------------------------------------------------------------------------
// Errors carry a kind and a path to the offending entry.

TEST(SerializeErrors, UnknownInstance) {
  auto j = collapse_doc();
  j["instance"] = "groups";
  const auto e = parse_error<SetBij>(j);
  EXPECT_EQ(e.kind(), ErrorKind::malformed);
  EXPECT_EQ(e.witness(), "document.instance");
}

TEST(SerializeErrors, ImageOutsideTheTarget) {
  auto j = collapse_doc();
  j["maps"]["f"]["level"]["1"]["a"] = "w";
  const auto e = parse_error<SetBij>(j);
  EXPECT_EQ(e.kind(), ErrorKind::malformed);
  EXPECT_EQ(e.witness().rfind("maps.f.level.1", 0), 0u) << e.witness();
}

TEST(SerializeErrors, NonDirectedIndex) {
  auto j = collapse_doc();
  j["indices"]["C"] = json::parse(R"({"elements": ["0", "1", "2"], "covers": [["0", "1"], ["0", "2"]]})");
  const auto e = parse_error<SetBij>(j);
  EXPECT_EQ(e.kind(), ErrorKind::validation);
  EXPECT_EQ(e.witness(), "indices.C");
}

TEST(SerializeErrors, BrokenFunctoriality) {
  const auto e = parse_error<SetBij>(load("tests/fixtures/broken_functoriality.json"));
  EXPECT_EQ(e.kind(), ErrorKind::validation);
  EXPECT_EQ(e.witness().rfind("objects.X", 0), 0u) << e.witness();
}

TEST(SerializeErrors, NonNaturalMap) {
  const auto e = parse_error<SetBij>(load("tests/fixtures/non_natural_map.json"));
  EXPECT_EQ(e.kind(), ErrorKind::validation);
  EXPECT_EQ(e.witness().rfind("maps.g", 0), 0u) << e.witness();
}

TEST(SerializeErrors, MissingValueAndUnknownReferences) {
  auto j = collapse_doc();
  j["objects"]["X"]["values"].erase("0");
  EXPECT_EQ(parse_error<SetBij>(j).witness(), "objects.X.values.0");
  j = collapse_doc();
  j["maps"]["f"]["source"] = "Q";
  EXPECT_EQ(parse_error<SetBij>(j).witness(), "maps.f.source");
  j = collapse_doc();
  j["depth"] = 1;
  EXPECT_EQ(parse_error<SetBij>(j).witness(), "document.depth");
}

TEST(SerializeErrors, ChainBoundaryMustSquareToZero) {
  auto j = load("samples/disk.json");
  j["objects"]["D1"]["values"]["*"] = json::parse(R"({"dims": {"0": 1, "1": 1, "2": 1}, "boundary": {"1": [[1]], "2": [[1]]}})");
  const auto e = parse_error<ChainF2>(j);
  EXPECT_EQ(e.kind(), ErrorKind::malformed);
  EXPECT_EQ(e.witness().rfind("objects.D1", 0), 0u) << e.witness();
}

TEST(SerializeErrors, WrongMatrixShape) {
  auto j = load("samples/disk.json");
  j["maps"]["q"]["level"]["*"]["1"] = json::parse("[[1, 1]]");
  const auto e = parse_error<ChainF2>(j);
  EXPECT_EQ(e.kind(), ErrorKind::malformed);
  EXPECT_EQ(e.witness().rfind("maps.q.level.*", 0), 0u) << e.witness();
}

TEST(SerializeErrors, WitnessOnAnUnknownElement) {
  auto j = load("samples/pro_iso.json");
  ASSERT_TRUE(j.contains("witnesses"));
  auto& first = j["witnesses"].begin().value();
  first["entries"][0]["upper"] = "9";
  const auto e = parse_error<SetBij>(j);
  EXPECT_EQ(e.kind(), ErrorKind::malformed);
}
