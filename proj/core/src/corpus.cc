// Copyright 2026 The Haggle Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "haggle/corpus.h"

#include <algorithm>
#include <cctype>
#include <cstdio>
#include <map>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "haggle/error.h"
#include "haggle/generator.h"
#include "haggle/hybrid.h"
#include "haggle/json_io.h"
#include "haggle/pricing.h"
#include "haggle/tokenizer.h"

namespace haggle {
namespace {

using nlohmann::json;

using Bank = std::vector<std::string_view>;

// Phrase banks for the scripted dialogues. {item} is the posting noun, {p}
// a "$" price and {n} a bare number. Bare numbers only appear between
// words that also flank "$" prices elsewhere in the banks.
const Bank kBuyerGreet = {
    "Hello do you still have the {item}?", "Hi, is the {item} still available?",
    "Hey there, I am interested in your {item}.", "Hello! I saw your listing for the {item}."};
const Bank kSellerGreet = {"Hello, yes the {item} is still available", "Hi! Yes it is still for sale.",
                           "Hey, yes I still have it."};
const Bank kInquire = {"What condition is it in?", "Are there any scratches or problems?",
                       "How old is it?", "Why are you selling it?",
                       "Does it come with anything else?"};
const Bank kInform = {"It is in great condition and works like a champ!",
                      "Everything works perfectly and it has been well cared for.",
                      "It has some light wear but works great.",
                      "I am moving soon so I need to sell it quickly.",
                      "It was barely used and comes with everything."};
const Bank kBuyerOpen = {"How about {p}?",
                         "Would you take {p} for it?",
                         "I can offer {p} for it.",
                         "Would you do {p} and I pick it up?",
                         "Can you do {p}?",
                         "My budget is {p}.",
                         "How about {n}?",
                         "Can you do {n}?"};
const Bank kBuyerCounter = {"Will you do {n} and you deliver it?",
                            "Can you do {p}?",
                            "I could go up to {p}.",
                            "That is still a lot. How about {p}?",
                            "How about {n}?",
                            "Would you do {p} and I pick it up?"};
const Bank kSellerCounter = {
    "I am willing to lower the price, but {q} is a little too low. How about {p}?",
    "I can do {p}.",
    "How about {p} and I will deliver it?",
    "The lowest I can go is {p}.",
    "Sorry, that is too low. I could do {p}.",
    "{p} is my best price."};
const Bank kBuyerDisagree = {"No, that is too high for me.", "I cannot pay that much.",
                             "Sorry, that is too much."};
const Bank kSellerDisagree = {"No, that is too low.", "Sorry, I can't go that low.",
                              "Nope, I need more than that."};
const Bank kAgree = {"Okay, that sounds like a deal!", "Deal.", "Ok, sounds good to me.",
                     "Sure, that works for me.", "Alright, deal."};
const Bank kThanks = {"Great thanks!", "Thank you!", "Thanks, sounds good."};

const Bank kDnGreet = {"hi", "hello there", "hey"};
const Bank kDnPropose = {"{split} .", "how about {split} ?", "what if {split} ?",
                         "let's say {split} ."};
const Bank kDnDisagree = {"no , that does not work for me .", "i can't do that ."};
const Bank kDnAgree = {"ok deal", "sounds good .", "sure , deal ."};

struct CategoryInfo {
  std::string_view noun;
  int min_price;
  int max_price;
  Bank titles;
  Bank descriptions;
};

const CategoryInfo& Info(std::string_view category) {
  static const std::map<std::string_view, CategoryInfo> kInfo = {
      {"housing",
       {"apartment", 800, 3000,
        {"Sunny 1BR apartment near downtown", "Spacious 2BR with balcony", "Studio close to campus"},
        {"Hardwood floors and lots of light.", "Laundry in building, parking included.",
         "Quiet street, walk to shops."}}},
      {"furniture",
       {"couch", 50, 600,
        {"Grey sectional couch", "Solid oak dining table", "Leather recliner"},
        {"Pet free and smoke free home.", "Minor scuffs, very sturdy.",
         "Must pick up this weekend."}}},
      {"car",
       {"car", 2000, 15000,
        {"2009 Honda Civic", "2012 Toyota Corolla", "2007 Subaru Outback"},
        {"Clean title, new tires.", "Runs great, regular oil changes.",
         "Some dents but mechanically sound."}}},
      {"bike",
       {"bike", 100, 900,
        {"Trek road bike 56cm", "Specialized mountain bike", "Vintage steel commuter"},
        {"Recently tuned up.", "New chain and brake pads.", "Light rust on the frame."}}},
      {"phone",
       {"phone", 80, 700,
        {"iPhone 8 64GB unlocked", "Samsung Galaxy S9", "Google Pixel 3"},
        {"Screen has no cracks.", "Comes with charger and case.", "Battery holds a full day."}}},
      {"electronics",
       {"TV", 60, 900,
        {"JVC 70 inch TV", "Sony soundbar", "Canon DSLR camera"},
        {"Works and looks like new.", "Includes remote and cables.",
         "Just installed a new lamp."}}},
  };
  const auto it = kInfo.find(category);
  if (it == kInfo.end()) return kInfo.at("electronics");
  return it->second;
}

std::string_view Pick(const Bank& bank, Rng& rng) {
  return bank[static_cast<std::size_t>(rng.UniformInt(static_cast<int>(bank.size())))];
}

void ReplaceAll(std::string& s, std::string_view from, std::string_view to) {
  for (std::size_t at = s.find(from); at != std::string::npos; at = s.find(from, at + to.size())) {
    s.replace(at, from.size(), to);
  }
}

std::string Fill(std::string_view pattern, std::string_view item, std::optional<Money> price = {},
                 std::optional<Money> other = {}) {
  std::string s(pattern);
  ReplaceAll(s, "{item}", item);
  if (price) {
    ReplaceAll(s, "{p}", price->ToPriceText());
    ReplaceAll(s, "{n}", std::to_string(price->cents() / 100));
  }
  if (other) ReplaceAll(s, "{q}", other->ToPriceText());
  return s;
}

Money WholeDollars(double dollars) {
  return Money::FromCents(static_cast<std::int64_t>(std::llround(std::max(dollars, 1.0))) * 100);
}

std::string Lower(std::string s) {
  for (char& c : s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return s;
}

DialogueEvent StructuralEvent(int turn, Role role, EventKind kind,
                              std::optional<Money> price = std::nullopt,
                              std::optional<Split> split = std::nullopt) {
  return {turn, role, kind, std::nullopt, price, split};
}

double Uniform(Rng& rng, double lo, double hi) { return lo + (hi - lo) * rng.Uniform(); }

void RequireArray(const json& j, std::string_view what) {
  if (!j.is_array()) throw SchemaError(std::string(what) + " must be a JSON array");
}

std::string DescriptionText(const json& d) {
  if (d.is_string()) return d.get<std::string>();
  std::string out;
  if (d.is_array()) {
    for (const auto& line : d) {
      if (!line.is_string()) continue;
      if (!out.empty()) out += ' ';
      out += line.get<std::string>();
    }
  }
  return out;
}

json RecordToJson(const DialogueRecord& r) {
  json events = json::array();
  for (const auto& e : r.events) events.push_back(EventToJson(e));
  json out = {{"id", r.id}, {"scenario", ScenarioToJson(r.scenario)}, {"events", events}};
  if (r.outcome) out["outcome"] = OutcomeToJson(*r.outcome);
  return out;
}

CoarseDialogueAct StructuralAct(const DialogueEvent& e) {
  switch (e.kind) {
    case EventKind::kOffer: return {Intent::kOffer, e.price, e.split};
    case EventKind::kAccept: return CoarseDialogueAct::Of(Intent::kAccept);
    case EventKind::kReject: return CoarseDialogueAct::Of(Intent::kReject);
    case EventKind::kQuit: return CoarseDialogueAct::Of(Intent::kQuit);
    case EventKind::kMessage: break;
  }
  return CoarseDialogueAct::Of(Intent::kUnknown);
}

Outcome RecordOutcome(const DialogueState& state) {
  Outcome o = ComputeOutcome(state);
  o.utilities = {};
  o.num_turns = 0;
  return o;
}

}  // namespace

bool DialogueRecord::operator==(const DialogueRecord& other) const {
  return RecordToJson(*this) == RecordToJson(other);
}

CorpusFormat ParseCorpusFormat(std::string_view name) {
  if (name == "canonical") return CorpusFormat::kCanonical;
  if (name == "cocoa-import") return CorpusFormat::kCocoaImport;
  throw HaggleError("unknown corpus format '" + std::string(name) + "'");
}

std::vector<DialogueRecord> CorpusFromJson(const json& j) {
  RequireArray(j, "corpus");
  std::vector<DialogueRecord> out;
  out.reserve(j.size());
  for (std::size_t i = 0; i < j.size(); ++i) {
    const json& r = j[i];
    try {
      if (!r.is_object()) throw SchemaError("record must be an object");
      for (const auto& [k, v] : r.items()) {
        if (k != "id" && k != "scenario" && k != "events" && k != "outcome") {
          throw SchemaError("unknown field '" + k + "'");
        }
      }
      DialogueRecord rec;
      rec.id = r.contains("id") ? r.at("id").get<std::string>() : "dialogue-" + std::to_string(i);
      if (!r.contains("scenario")) throw SchemaError("missing field 'scenario'");
      if (!r.contains("events")) throw SchemaError("missing field 'events'");
      rec.scenario = ScenarioFromJson(r.at("scenario"));
      RequireArray(r.at("events"), "events");
      DialogueState replay(rec.scenario);
      for (const auto& e : r.at("events")) {
        rec.events.push_back(EventFromJson(e));
        replay.Append(rec.events.back(), StructuralAct(rec.events.back()));
      }
      if (r.contains("outcome")) rec.outcome = OutcomeFromJson(r.at("outcome"));
      out.push_back(std::move(rec));
    } catch (const std::exception& e) {
      throw SchemaError("record " + std::to_string(i) + ": " + e.what());
    }
  }
  return out;
}

json CorpusToJson(std::span<const DialogueRecord> records) {
  json out = json::array();
  for (const auto& r : records) out.push_back(RecordToJson(r));
  return out;
}

std::vector<DialogueRecord> ImportCocoa(const json& j, LoadReport* report) {
  RequireArray(j, "dataset");
  LoadReport local;
  LoadReport& rep = report ? *report : local;
  std::vector<DialogueRecord> out;
  for (std::size_t i = 0; i < j.size(); ++i) {
    ++rep.records_read;
    try {
      const json& r = j[i];
      const json& kbs = r.at("scenario").at("kbs");
      if (!kbs.is_array() || kbs.size() != 2) throw SchemaError("expected two kbs");
      std::array<Role, 2> roles{};
      const json* buyer = nullptr;
      const json* seller = nullptr;
      for (int a = 0; a < 2; ++a) {
        roles[a] = ParseRole(Lower(kbs[a].at("personal").at("Role").get<std::string>()));
        if (roles[a] == Role::kBuyer) buyer = &kbs[a];
        if (roles[a] == Role::kSeller) seller = &kbs[a];
      }
      if (!buyer || !seller) throw SchemaError("need one buyer and one seller");
      const json& item = seller->at("item");
      CBScenario cb;
      cb.category = item.value("Category", "");
      cb.title = item.value("Title", "");
      cb.description = item.contains("Description") ? DescriptionText(item["Description"]) : "";
      cb.listing_price = MoneyFromJson(item.at("Price"));
      cb.buyer_target = MoneyFromJson(buyer->at("personal").at("Target"));
      cb.Validate();

      DialogueRecord rec;
      rec.id = r.contains("uuid") && r["uuid"].is_string() ? r["uuid"].get<std::string>()
                                                           : "cocoa-" + std::to_string(i);
      rec.scenario = cb;
      for (const json& e : r.at("events")) {
        const json& agent = e.at("agent");
        const int a = agent.is_string() ? std::stoi(agent.get<std::string>()) : agent.get<int>();
        if (a != 0 && a != 1) throw SchemaError("agent must be 0 or 1");
        DialogueEvent ev;
        ev.turn = static_cast<int>(rec.events.size());
        ev.role = roles[a];
        const std::string action = e.at("action").get<std::string>();
        if (action == "message") {
          ev.kind = EventKind::kMessage;
          ev.text = e.at("data").get<std::string>();
        } else if (action == "offer") {
          ev.kind = EventKind::kOffer;
          ev.price = MoneyFromJson(e.at("data").at("price"));
        } else if (action == "accept") {
          ev.kind = EventKind::kAccept;
        } else if (action == "reject") {
          ev.kind = EventKind::kReject;
        } else if (action == "quit") {
          ev.kind = EventKind::kQuit;
        } else {
          continue;
        }
        rec.events.push_back(std::move(ev));
      }
      if (r.contains("outcome") && r["outcome"].is_object()) {
        const json& o = r["outcome"];
        Outcome outcome;
        outcome.agreement = o.value("reward", 0) == 1;
        if (outcome.agreement && o.contains("offer") && o["offer"].is_object() &&
            o["offer"].contains("price") && o["offer"]["price"].is_number()) {
          outcome.final_price = MoneyFromJson(o["offer"]["price"]);
        }
        rec.outcome = outcome;
      }
      out.push_back(std::move(rec));
      ++rep.records_loaded;
    } catch (const std::exception& e) {
      ++rep.records_skipped;
      rep.messages.push_back("record " + std::to_string(i) + ": " + e.what());
    }
  }
  return out;
}

std::string ReadFile(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw HaggleError("cannot read " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void WriteFile(const std::filesystem::path& path, std::string_view content) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw HaggleError("cannot write " + path.string());
  out.write(content.data(), static_cast<std::streamsize>(content.size()));
  if (!out) throw HaggleError("failed writing " + path.string());
}

std::vector<DialogueRecord> LoadCorpus(const std::filesystem::path& path, CorpusFormat format,
                                       LoadReport* report) {
  json j;
  try {
    j = json::parse(ReadFile(path));
  } catch (const json::parse_error& e) {
    throw SchemaError(path.string() + ": invalid JSON: " + e.what());
  }
  if (format == CorpusFormat::kCocoaImport) return ImportCocoa(j, report);
  auto records = CorpusFromJson(j);
  if (report) {
    report->records_read += static_cast<int>(records.size());
    report->records_loaded += static_cast<int>(records.size());
  }
  return records;
}

void SaveCorpus(const std::filesystem::path& path, std::span<const DialogueRecord> records) {
  WriteFile(path, CorpusToJson(records).dump(2) + "\n");
}

std::vector<CBScenario> GenerateScenarios(const Posting& posting,
                                          std::span<const double> multipliers) {
  if (posting.listing_price.cents() <= 0) throw HaggleError("listing price must be positive");
  std::vector<CBScenario> out;
  for (const double m : multipliers) {
    if (!(m > 0 && m < 1)) throw HaggleError("target multiplier must lie in (0, 1)");
    CBScenario s{posting.category, posting.title, posting.description, posting.listing_price,
                 Money::FromDollars(m * posting.listing_price.dollars())};
    s.Validate();
    out.push_back(std::move(s));
  }
  return out;
}

std::vector<Posting> SynthPostings(std::uint64_t seed, int n) {
  if (n < 1) throw HaggleError("need at least one posting");
  Rng rng(seed);
  std::vector<Posting> out;
  for (int i = 0; i < n; ++i) {
    const std::string_view category = kCategories[static_cast<std::size_t>(i) % kCategories.size()];
    const CategoryInfo& info = Info(category);
    const int steps = (info.max_price - info.min_price) / 5;
    Posting p;
    p.category = std::string(category);
    p.title = std::string(Pick(info.titles, rng));
    p.description = std::string(Pick(info.descriptions, rng));
    p.listing_price = Money::FromCents((info.min_price + 5 * rng.UniformInt(steps + 1)) * 100LL);
    out.push_back(std::move(p));
  }
  return out;
}

DNScenario SynthDnScenario(Rng& rng) {
  DNScenario s;
  for (;;) {
    int total = 0;
    for (int& c : s.counts) {
      c = 1 + rng.UniformInt(kDNMaxCount);
      total += c;
    }
    if (total >= 5 && total <= 7) break;
  }
  for (auto& values : s.values) {
    for (;;) {
      const int budget0 = kDNValueTotal / s.counts[0];
      values[0] = rng.UniformInt(budget0 + 1);
      const int left = kDNValueTotal - values[0] * s.counts[0];
      values[1] = rng.UniformInt(left / s.counts[1] + 1);
      const int rest = left - values[1] * s.counts[1];
      if (rest % s.counts[2] != 0) continue;
      values[2] = rest / s.counts[2];
      const int nonzero = (values[0] > 0) + (values[1] > 0) + (values[2] > 0);
      if (nonzero >= 2) break;
    }
  }
  s.Validate();
  return s;
}

DialogueRecord SynthCbDialogue(const CBScenario& scenario, std::string id, Rng& rng) {
  scenario.Validate();
  const std::string_view item = Info(scenario.category).noun;
  DialogueState st(scenario);
  int turn = 0;
  const auto say = [&](Role role, std::string text, CoarseDialogueAct act) {
    st.Append({turn++, role, EventKind::kMessage, std::move(text), std::nullopt, std::nullopt},
              std::move(act));
  };
  const auto structural = [&](Role role, EventKind kind, std::optional<Money> price = {}) {
    const DialogueEvent e = StructuralEvent(turn++, role, kind, price);
    st.Append(e, StructuralAct(e));
  };

  say(Role::kBuyer, Fill(Pick(kBuyerGreet, rng), item), CoarseDialogueAct::Of(Intent::kGreet));
  say(Role::kSeller, Fill(Pick(kSellerGreet, rng), item), CoarseDialogueAct::Of(Intent::kGreet));
  if (rng.Uniform() < 0.6) {
    say(Role::kBuyer, std::string(Pick(kInquire, rng)), CoarseDialogueAct::Of(Intent::kInquire));
    say(Role::kSeller, std::string(Pick(kInform, rng)), CoarseDialogueAct::Of(Intent::kInform));
  }

  const double listing = scenario.listing_price.dollars();
  const double target = scenario.buyer_target.dollars();
  // Private limits: the most the buyer agrees to, the least the seller does.
  const double buyer_cap = target + (listing - target) * Uniform(rng, 0.4, 0.9);
  const double seller_floor =
      std::max(kSellerBottomlineFraction * listing, listing * Uniform(rng, 0.72, 0.9));
  std::array<Money, 2> price = {WholeDollars(target * Uniform(rng, 0.8, 1.0)),
                                WholeDollars(listing * Uniform(rng, 0.92, 1.0))};
  const auto acceptable = [&](Role role, Money p) {
    return role == Role::kBuyer ? p.dollars() <= buyer_cap : p.dollars() >= seller_floor;
  };

  say(Role::kBuyer, Fill(Pick(kBuyerOpen, rng), item, price[0]),
      CoarseDialogueAct::WithPrice(Intent::kPropose, price[0]));
  say(Role::kSeller, Fill(Pick(kSellerCounter, rng), item, price[1], price[0]),
      CoarseDialogueAct::WithPrice(Intent::kCounter, price[1]));

  Role speaker = Role::kBuyer;
  const int rounds = 2 + rng.UniformInt(5);
  for (int round = 0; round < rounds; ++round, speaker = Partner(speaker)) {
    const Role other = Partner(speaker);
    const Money q = price[Slot(other)];
    if (acceptable(speaker, q)) {
      say(speaker, std::string(Pick(kAgree, rng)), CoarseDialogueAct::Of(Intent::kAgree));
      Role offerer = other;
      if (rng.Uniform() < 0.5) {
        say(other, std::string(Pick(kThanks, rng)), CoarseDialogueAct::Of(Intent::kAgree));
        offerer = speaker;
      }
      structural(offerer, EventKind::kOffer, q);
      structural(Partner(offerer), rng.Uniform() < 0.95 ? EventKind::kAccept : EventKind::kReject);
      break;
    }
    if (rng.Uniform() < 0.2) {
      say(speaker, std::string(Pick(speaker == Role::kBuyer ? kBuyerDisagree : kSellerDisagree, rng)),
          CoarseDialogueAct::Of(Intent::kDisagree));
      continue;
    }
    const double limit = speaker == Role::kBuyer ? buyer_cap : seller_floor;
    double next = 0.5 * (price[Slot(speaker)].dollars() + q.dollars());
    next = speaker == Role::kBuyer ? std::min(next, limit) : std::max(next, limit);
    const Money mine = WholeDollars(next);
    price[Slot(speaker)] = mine;
    const Bank& bank = speaker == Role::kBuyer ? kBuyerCounter : kSellerCounter;
    say(speaker, Fill(Pick(bank, rng), item, mine, q),
        CoarseDialogueAct::WithPrice(mine == q ? Intent::kPropose : Intent::kCounter, mine));
  }
  if (!st.terminal()) {
    if (rng.Uniform() < 0.5) {
      structural(speaker, EventKind::kQuit);
    } else {
      structural(speaker, EventKind::kOffer, price[Slot(speaker)]);
      structural(Partner(speaker), EventKind::kReject);
    }
  }
  return {std::move(id), scenario, st.events(), RecordOutcome(st)};
}

DialogueRecord SynthDnDialogue(const DNScenario& scenario, std::string id, Rng& rng) {
  scenario.Validate();
  DialogueState st(scenario);
  int turn = 0;
  std::array<HybridConfig, 2> config;
  for (auto& c : config) c.dn_target = 5 + rng.UniformInt(4);
  const auto say = [&](Role role, std::string text, CoarseDialogueAct act) {
    st.Append({turn++, role, EventKind::kMessage, std::move(text), std::nullopt, std::nullopt},
              std::move(act));
  };

  Role speaker = Role::kAgentA;
  if (rng.Uniform() < 0.5) {
    say(Role::kAgentA, std::string(Pick(kDnGreet, rng)), CoarseDialogueAct::Of(Intent::kGreet));
    say(Role::kAgentB, std::string(Pick(kDnGreet, rng)), CoarseDialogueAct::Of(Intent::kGreet));
  }
  constexpr int kMaxEvents = 14;
  while (!st.terminal() && st.num_events() < kMaxEvents) {
    const CoarseDialogueAct act = HybridNextActDN(st, speaker, config[Slot(speaker)]);
    switch (act.intent) {
      case Intent::kAccept:
      case Intent::kReject: {
        const DialogueEvent e = StructuralEvent(
            turn++, speaker, act.intent == Intent::kAccept ? EventKind::kAccept : EventKind::kReject);
        st.Append(e, act);
        break;
      }
      case Intent::kOffer: {
        const DialogueEvent e =
            StructuralEvent(turn++, speaker, EventKind::kOffer, std::nullopt, act.split);
        st.Append(e, act);
        break;
      }
      case Intent::kPropose:
      case Intent::kCounter: {
        const auto& last = st.acts();
        if (!last.empty() && last.back().split && rng.Uniform() < 0.2) {
          say(speaker, std::string(Pick(kDnDisagree, rng)),
              CoarseDialogueAct::Of(Intent::kDisagree));
          break;
        }
        std::string text(Pick(kDnPropose, rng));
        ReplaceAll(text, "{split}", SplitPhrase(*act.split, scenario, speaker));
        say(speaker, std::move(text), act);
        break;
      }
      case Intent::kAgree:
        say(speaker, std::string(Pick(kDnAgree, rng)), act);
        break;
      default:
        say(speaker, "hmm", CoarseDialogueAct::Of(Intent::kUnknown));
        break;
    }
    speaker = Partner(speaker);
  }
  if (!st.terminal()) {
    if (st.pending_offer()) {
      st.Append(StructuralEvent(turn++, speaker, EventKind::kReject), CoarseDialogueAct::Of(Intent::kReject));
    } else {
      st.Append(StructuralEvent(turn++, speaker, EventKind::kQuit), CoarseDialogueAct::Of(Intent::kQuit));
    }
  }
  return {std::move(id), scenario, st.events(), RecordOutcome(st)};
}

std::vector<DialogueRecord> SynthCorpus(Task task, int n, std::uint64_t seed) {
  if (n < 0) throw HaggleError("dialogue count must be non-negative");
  std::vector<DialogueRecord> out;
  out.reserve(static_cast<std::size_t>(n));
  const Rng root(seed);
  if (task == Task::kCraigslist) {
    const int postings = std::max(1, (n + 2) / 3);
    std::vector<CBScenario> scenarios;
    for (const auto& p : SynthPostings(seed, postings)) {
      for (auto& s : GenerateScenarios(p)) scenarios.push_back(std::move(s));
    }
    for (int i = 0; i < n; ++i) {
      Rng rng = root.Fork(static_cast<std::uint64_t>(i) + 1);
      char id[32];
      std::snprintf(id, sizeof id, "cb-%06d", i);
      out.push_back(SynthCbDialogue(scenarios[static_cast<std::size_t>(i)], id, rng));
    }
  } else {
    for (int i = 0; i < n; ++i) {
      Rng rng = root.Fork(static_cast<std::uint64_t>(i) + 1);
      const DNScenario s = SynthDnScenario(rng);
      char id[32];
      std::snprintf(id, sizeof id, "dn-%06d", i);
      out.push_back(SynthDnDialogue(s, id, rng));
    }
  }
  return out;
}

json CorpusStats::ToJson() const {
  return {{"num_dialogues", num_dialogues},
          {"avg_turns", avg_turns},
          {"avg_tokens_per_turn", avg_tokens_per_turn},
          {"vocab_size", vocab_size},
          {"vocab_size_excluding_numbers", vocab_size_excluding_numbers}};
}

CorpusStats ComputeCorpusStats(std::span<const DialogueRecord> records) {
  if (records.empty()) throw HaggleError("corpus is empty");
  CorpusStats s;
  s.num_dialogues = static_cast<int>(records.size());
  std::set<std::string> words, numbers;
  long events = 0, messages = 0, tokens = 0;
  for (const auto& r : records) {
    events += static_cast<long>(r.events.size());
    for (const auto& e : r.events) {
      if (e.kind != EventKind::kMessage || !e.text) continue;
      ++messages;
      for (const Token& t : Tokenize(*e.text)) {
        ++tokens;
        if (t.kind == TokenKind::kWord) words.insert(t.surface);
        if (t.kind == TokenKind::kNumber) numbers.insert(t.surface);
      }
    }
  }
  s.avg_turns = static_cast<double>(events) / s.num_dialogues;
  s.avg_tokens_per_turn = messages > 0 ? static_cast<double>(tokens) / messages : 0.0;
  s.vocab_size_excluding_numbers = static_cast<int>(words.size());
  s.vocab_size = static_cast<int>(words.size() + numbers.size());
  return s;
}

std::vector<std::string> Utterances(std::span<const DialogueRecord> records) {
  std::vector<std::string> out;
  for (const auto& r : records) {
    for (const auto& e : r.events) {
      if (e.kind == EventKind::kMessage && e.text) out.push_back(*e.text);
    }
  }
  return out;
}

std::vector<ParsedDialogue> ParseCorpus(std::span<const DialogueRecord> records,
                                        const Parser& parser) {
  std::vector<ParsedDialogue> out;
  out.reserve(records.size());
  for (const auto& r : records) out.push_back(ParseDialogue(r.id, r.scenario, r.events, parser));
  return out;
}

std::string ParsedToJsonLines(std::span<const ParsedDialogue> parsed) {
  std::string out;
  for (const auto& d : parsed) {
    json events = json::array(), acts = json::array();
    for (const auto& e : d.events) events.push_back(EventToJson(e));
    for (const auto& a : d.acts) acts.push_back(ActToJson(a));
    out += json{{"id", d.id}, {"scenario", ScenarioToJson(d.scenario)}, {"events", events},
                {"acts", acts}}
               .dump();
    out += '\n';
  }
  return out;
}

std::vector<ParsedDialogue> ParsedFromJsonLines(std::string_view text) {
  std::vector<ParsedDialogue> out;
  std::size_t line_no = 0;
  while (!text.empty()) {
    const std::size_t nl = text.find('\n');
    const std::string_view line = text.substr(0, nl);
    text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string_view::npos) continue;
    try {
      const json j = json::parse(line);
      ParsedDialogue d;
      d.id = j.at("id").get<std::string>();
      d.scenario = ScenarioFromJson(j.at("scenario"));
      for (const auto& e : j.at("events")) d.events.push_back(EventFromJson(e));
      for (const auto& a : j.at("acts")) d.acts.push_back(ActFromJson(a));
      if (d.events.size() != d.acts.size()) throw SchemaError("events and acts differ in length");
      out.push_back(std::move(d));
    } catch (const std::exception& e) {
      throw SchemaError("parsed corpus line " + std::to_string(line_no) + ": " + e.what());
    }
  }
  return out;
}

std::string ExportParsed(std::span<const DialogueRecord> records, const Parser& parser) {
  const auto parsed = ParseCorpus(records, parser);
  return ParsedToJsonLines(parsed);
}

}  // namespace haggle
