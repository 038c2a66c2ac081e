#include "wm/fixtures.hpp"

#include <map>

namespace wm {

namespace {

/* hub: one blue hub with two red satellites; the two excursions x->r1->x and
 * x->r2->x permit the same color sequence, so hypotheses double per visit. */
const std::string kHub = R"(weakmodel v1
colors B R
node x B
node r1 R
node r2 R
edge x r1
edge r1 x
edge x r2
edge r2 x
)";

const std::string kHubP = R"(weakmodel v1
colors B R
node x B
node r1 R
node r2 R
edge x r1 0.5
edge r1 x 1
edge x r2 0.5
edge r2 x 1
)";

/* detour: a two-node red cycle where p may take a blue detour through s.
 * Position inside the red cycle stays ambiguous but never grows. */
const std::string kDetour = R"(weakmodel v1
colors R B
node p R
node q R
node s B
edge p q
edge q p
edge p s
edge s p
)";

const std::string kDetourP = R"(weakmodel v1
colors R B
node p R
node q R
node s B
edge p q 0.5
edge q p 1
edge p s 0.5
edge s p 1
)";

/* two_stage: two same-colored self-loop nodes in a row; the transfer time
 * from a to b is unobservable, so the hypothesis count grows linearly. */
const std::string kTwoStage = R"(weakmodel v1
colors B
node a B
node b B
edge a a
edge a b
edge b b
)";

const std::string kTwoStageP = R"(weakmodel v1
colors B
node a B
node b B
edge a a 0.9
edge a b 0.1
edge b b 1
)";

/* two_stage_exit: two_stage plus a red neighbor of b; once R is observed the
 * walker is known to be at c, so the ambiguity stops growing. */
const std::string kTwoStageExit = R"(weakmodel v1
colors B R
node a B
node b B
node c R
edge a a
edge a b
edge b b
edge b c
edge c b
)";

const std::string kTwoStageExitP = R"(weakmodel v1
colors B R
node a B
node b B
node c R
edge a a 0.5
edge a b 0.5
edge b b 0.5
edge b c 0.5
edge c b 1
)";

/* branch_merge: two three-cycles joined by a branch a->g->h->i->e and a
 * return path f->j->c. Two node-disjoint closed walks of period 11 permit
 * the same color word, so the hypothesis count doubles per lap. */
const std::string kBranchMerge = R"(weakmodel v1
colors B R G O
node a B
node b R
node c G
node d B
node e R
node f G
node g R
node h G
node i B
node j O
edge a b
edge b c
edge c a
edge d e
edge e f
edge f d
edge a g
edge g h
edge h i
edge i e
edge f j
edge j c
)";

/* excursions: from a the walker takes a left excursion (b, then the c-b
 * loop, exit via d) or a right excursion (e, then the f-e loop, exit via
 * f->a); both emit R,B,B,...; the exit pattern resolves which one it was. */
const std::string kExcursions = R"(weakmodel v1
colors B R
node a B
node b R
node c B
node d B
node e R
node f B
edge a b
edge a e
edge b c
edge c b
edge c d
edge d a
edge e f
edge f e
edge f a
)";

const std::string kExcursionsP = R"(weakmodel v1
colors B R
node a B
node b R
node c B
node d B
node e R
node f B
edge a b 0.5
edge a e 0.5
edge b c 1
edge c b 0.9
edge c d 0.1
edge d a 1
edge e f 1
edge f e 0.9
edge f a 0.1
)";

/* excursions with a sticky right loop: the f->a exit probability drops to
 * 0.01, so right excursions last ~200 steps and returns to a become rare. */
const std::string kExcursionsPSticky = R"(weakmodel v1
colors B R
node a B
node b R
node c B
node d B
node e R
node f B
edge a b 0.5
edge a e 0.5
edge b c 1
edge c b 0.9
edge c d 0.1
edge d a 1
edge e f 1
edge f e 0.99
edge f a 0.01
)";

/* ring4: a four-cycle with alternating colors; rotating by two positions is
 * a color-preserving automorphism, so two hypotheses persist forever. */
const std::string kRing4 = R"(weakmodel v1
colors B R
node a B
node b R
node c B
node d R
edge a b
edge b c
edge c d
edge d a
)";

const std::string kRing4P = R"(weakmodel v1
colors B R
node a B
node b R
node c B
node d R
edge a b 1
edge b c 1
edge c d 1
edge d a 1
)";

/* trap: an all-blue triangle a-b / a-c with a green absorbing node d. The
 * triangle is untrackable, but every walk falls into the trackable trap. */
const std::string kTrap = R"(weakmodel v1
colors B G
node a B
node b B
node c B
node d G
edge a b
edge b a
edge a c
edge c a
edge a d
edge d d
)";

const std::string kTrapP = R"(weakmodel v1
colors B G
node a B
node b B
node c B
node d G
edge a b 0.3333333333333333
edge b a 1
edge a c 0.3333333333333333
edge c a 1
edge a d 0.3333333333333333
edge d d 1
)";

/* trap with a single color: the observation carries no information at all. */
const std::string kTrapMono = R"(weakmodel v1
colors B
node a B
node b B
node c B
node d B
edge a b
edge b a
edge a c
edge c a
edge a d
edge d d
)";

const std::string kTrapMonoP = R"(weakmodel v1
colors B
node a B
node b B
node c B
node d B
edge a b 0.3333333333333333
edge b a 1
edge a c 0.3333333333333333
edge c a 1
edge a d 0.3333333333333333
edge d d 1
)";

const std::map<std::string, const std::string*>& table() {
  static const std::map<std::string, const std::string*> t = {
      {"hub", &kHub},
      {"hub_p", &kHubP},
      {"detour", &kDetour},
      {"detour_p", &kDetourP},
      {"two_stage", &kTwoStage},
      {"two_stage_p", &kTwoStageP},
      {"two_stage_exit", &kTwoStageExit},
      {"two_stage_exit_p", &kTwoStageExitP},
      {"branch_merge", &kBranchMerge},
      {"excursions", &kExcursions},
      {"excursions_p", &kExcursionsP},
      {"excursions_p_sticky", &kExcursionsPSticky},
      {"ring4", &kRing4},
      {"ring4_p", &kRing4P},
      {"trap", &kTrap},
      {"trap_p", &kTrapP},
      {"trap_mono", &kTrapMono},
      {"trap_mono_p", &kTrapMonoP},
  };
  return t;
}

}  // namespace

const std::vector<std::string>& fixture_names() {
  static const std::vector<std::string> names = [] {
    std::vector<std::string> v;
    for (const auto& [k, _] : table()) v.push_back(k);
    return v;
  }();
  return names;
}

const std::string& fixture_text(const std::string& name) {
  auto it = table().find(name);
  if (it == table().end()) throw Error("unknown fixture: " + name);
  return *it->second;
}

WeakModel fixture(const std::string& name) { return parse_model(fixture_text(name)); }

}  // namespace wm
