#include <gtest/gtest.h>

#include <fstream>

#include "support.hpp"

using namespace promc;
using io::json;

namespace {

json load(const std::string& rel) {
  std::ifstream in(std::string(PROMC_SOURCE_DIR) + "/" + rel);
  return json::parse(in);
}

template <ModelCategory M>
json factorization_certificate(const ProMap<M>& f, StrictMode mode) {
  const auto sf = factor_strict(f, mode);
  cert::Builder<M> b("factor", default_depth);
  const auto in = b.map("f", sf.input);
  const auto i = b.map("i", sf.left);
  const auto p = b.map("p", sf.right);
  b.levelwise(i, mode == StrictMode::L1 ? ClassName::cofibration : ClassName::acyclic_cofibration);
  b.special(p, detect_special(sf.right, mode == StrictMode::L1 ? SpecialKind::acyclic_fibration : SpecialKind::fibration));
  b.equal({p, i}, {in});
  return b.finish();
}

ProMap<SetBij> collapse() { return io::parse_document<SetBij>(load("samples/collapse.json")).map("f"); }

}  // namespace

TEST(Certificate, FactorizationVerifies) {
  const auto v = cert::verify(factorization_certificate(collapse(), StrictMode::L1));
  EXPECT_TRUE(v.ok) << v.failure;
  EXPECT_EQ(v.lines.size(), 3u);
  for (const auto& l : v.lines) EXPECT_EQ(l.rfind("ok", 0), 0u) << l;
}

TEST(Certificate, SurvivesSerialization) {
  const auto c = factorization_certificate(collapse(), StrictMode::L2);
  EXPECT_TRUE(cert::verify(json::parse(c.dump(2))).ok);
  EXPECT_EQ(c["schema"], cert::schema);
}

TEST(Certificate, DeclaredMatchingClassMustMatch) {
  auto c = factorization_certificate(collapse(), StrictMode::L1);
  for (auto& claim : c["claims"])
    if (claim["kind"] == "special") claim["levels"]["1"]["we"] = !claim["levels"]["1"]["we"].get<bool>();
  const auto v = cert::verify(c);
  EXPECT_FALSE(v.ok);
  EXPECT_NE(v.failure.find("level 1"), std::string::npos) << v.failure;
}

TEST(Certificate, TamperedCompositeIsRejected) {
  auto c = factorization_certificate(collapse(), StrictMode::L1);
  // Rewire the input map so p o i no longer equals it: send both top elements through a different target.
  auto& objects = c["document"]["objects"];
  const std::string tgt = c["document"]["maps"]["f"]["target"];
  objects[tgt]["values"]["1"] = json::parse(R"(["u", "w"])");
  objects[tgt]["structure"][0]["map"] = json::parse(R"({"u": "y", "w": "y"})");
  c["document"]["maps"]["f"]["level"]["1"] = json::parse(R"({"a": "w", "b": "w"})");
  bool rejected = false;
  try {
    rejected = !cert::verify(c).ok;
  } catch (const Error&) {
    rejected = true;
  }
  EXPECT_TRUE(rejected);
}

TEST(Certificate, HomCountIsRecomputed) {
  const auto f = collapse();
  cert::Builder<SetBij> b("hom", default_depth);
  const auto x = b.object("X", f.source());
  const auto y = b.object("Y", f.target());
  auto h = hom_pro(f.source(), f.target());
  b.hom_count(x, y, h);
  EXPECT_TRUE(cert::verify(b.finish()).ok);
  h.count += 1;
  cert::Builder<SetBij> bad("hom", default_depth);
  bad.hom_count(bad.object("X", f.source()), bad.object("Y", f.target()), h);
  const auto v = cert::verify(bad.finish());
  EXPECT_FALSE(v.ok);
  EXPECT_NE(v.failure.find("recomputed"), std::string::npos);
}

TEST(Certificate, IsoClaimsCheckBothComposites) {
  gen::Rng rng(83);
  const auto pc = gen::pro_iso_case<SetBij>(rng, {});
  const auto r = pro_factor_iso(pc.f, pc.witnesses);
  cert::Builder<SetBij> b("pro-factor-iso", default_depth);
  b.iso(b.map("i", r.left_iso.forward), b.map("i.inverse", r.left_iso.backward));
  EXPECT_TRUE(cert::verify(b.finish()).ok);
  cert::Builder<SetBij> wrong("pro-factor-iso", default_depth);
  wrong.iso(wrong.map("i", r.left_iso.forward), wrong.map("i.inverse", r.left_iso.forward));
  EXPECT_FALSE(cert::verify(wrong.finish()).ok);
}

TEST(Certificate, TowerStepsAreReplayed) {
  const auto f = io::parse_document<SetBij>(load("samples/collapse.json")).map("f");
  const auto t = build_cocell_tower(f, SpecialKind::fibration);
  cert::Builder<SetBij> b("cocell", default_depth);
  b.tower(b.map("f", f), t, SpecialKind::fibration);
  auto c = b.finish();
  EXPECT_TRUE(cert::verify(c).ok);
  c["claims"][0]["special"] = "acyclic-fib";
  EXPECT_FALSE(cert::verify(c).ok);
}

TEST(Certificate, GeneratedFactorizationsVerifyAndDetectFlippedVerdicts) {
  gen::Rng rng(89);
  const gen::Params prm{4, 3, 2, 1};
  for (int trial = 0; trial < 40; ++trial) {
    const auto index = gen::random_index(rng, prm.max_index);
    const auto mode = gen::coin(rng) ? StrictMode::L1 : StrictMode::L2;
    for (auto c : {factorization_certificate(gen::Gen<SetBij>::level_map(rng, index, prm), mode),
                   factorization_certificate(gen::Gen<ChainF2>::level_map(rng, index, prm), mode)}) {
      const auto v = cert::verify(c);
      ASSERT_TRUE(v.ok) << v.failure;
      for (auto& claim : c["claims"])
        if (claim["kind"] == "special") {
          auto& lv = claim["levels"].begin().value();
          lv["fib"] = !lv["fib"].get<bool>();
        }
      EXPECT_FALSE(cert::verify(c).ok);
    }
  }
}

TEST(Certificate, FixturesAreRejected) {
  const auto v = cert::verify(load("tests/fixtures/falsified_certificate.json"));
  EXPECT_FALSE(v.ok);
  EXPECT_EQ(v.failure.rfind("claims[1]", 0), 0u) << v.failure;
  // A tampered inverse is no longer a natural map, so the embedded document is rejected.
  try {
    cert::verify(load("tests/fixtures/tampered_iso_certificate.json"));
    FAIL() << "expected a validation error";
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::validation);
    EXPECT_EQ(e.witness().rfind("maps.left_iso", 0), 0u) << e.witness();
  }
}

TEST(Certificate, SchemaAndClaimKindsAreChecked) {
  auto c = factorization_certificate(collapse(), StrictMode::L1);
  auto bad = c;
  bad["schema"] = "promc-certificate/0";
  EXPECT_THROW(cert::verify(bad), Error);
  bad = c;
  bad["claims"][0]["kind"] = "magic";
  EXPECT_THROW(cert::verify(bad), Error);
  bad = c;
  bad["claims"][2]["lhs"] = json::parse(R"(["f", "p"])");
  EXPECT_FALSE(cert::verify(bad).ok);
}
