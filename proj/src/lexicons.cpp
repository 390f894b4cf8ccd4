#include "chronicle/lexicons.hpp"

namespace chronicle {

LexiconSet LexiconSet::builtin() {
    LexiconSet lex;
    lex.positive = {
        "good",      "great",    "excellent", "positive", "strong",   "right",
        "best",      "better",   "support",   "supports", "agree",    "hope",
        "hopeful",   "peace",    "peaceful",  "success",  "succeed",  "effective",
        "wise",      "smart",    "brave",     "fair",     "honest",   "safe",
        "benefit",   "progress", "improve",   "improved", "win",      "welcome",
        "praise",    "respect",  "trust",     "calm",     "clear",    "helpful"};
    lex.negative = {
        "bad",       "worse",     "worst",    "wrong",     "weak",     "fail",
        "failed",    "failure",   "crisis",   "war",       "threat",   "danger",
        "dangerous", "fear",      "afraid",   "corrupt",   "violence", "violent",
        "kill",      "killed",    "dead",     "death",     "loss",     "lose",
        "sad",       "tragedy",   "tragic",   "blame",     "angry",    "anger",
        "disaster",  "terrible",  "awful",    "horrible",  "crime",    "lie",
        "lies",      "propaganda"};
    lex.neutral = {
        "state",   "government", "official", "officials", "report",  "reports",
        "policy",  "public",     "people",   "country",   "nation",  "law",
        "plan",    "plans",      "talks",    "meeting",   "member",  "members",
        "group",   "leader",     "leaders",  "press",     "media",   "question"};
    lex.connectives = {
        "and",       "but",          "because",  "however",   "therefore", "moreover",
        "although",  "though",       "since",    "thus",      "hence",     "furthermore",
        "meanwhile", "nevertheless", "also",     "instead",   "besides",   "consequently",
        "whereas",   "while",        "so",       "yet",       "still",     "then",
        "finally",   "additionally", "likewise", "otherwise", "overall"};
    lex.hedges = {
        "may",      "might",    "could",    "would",   "should",  "perhaps",
        "maybe",    "possibly", "probably", "likely",  "unlikely","seems",
        "seem",     "appear",   "appears",  "suggest", "suggests","somewhat",
        "almost",   "nearly",   "roughly",  "about",   "around",  "arguably",
        "apparently","presumably","reportedly","allegedly","supposedly","sort",
        "kind",     "rather",   "quite",    "generally","usually","often",
        "sometimes","believe",  "think",    "guess",   "assume",  "suppose"};
    return lex;
}

const WordSet& builtin_event_words() {
    static const WordSet words = {
        // verbs with inflections
        "declare",  "declares",  "declared",  "declaring",
        "warn",     "warns",     "warned",    "warning",
        "urge",     "urges",     "urged",     "urging",
        "condemn",  "condemns",  "condemned", "condemning",
        "announce", "announces", "announced", "announcing",
        "say",      "says",      "said",
        "report",   "reports",   "reported",  "reporting",
        "launch",   "launches",  "launched",
        "impose",   "imposes",   "imposed",   "imposing",
        "freeze",   "freezes",   "froze",     "frozen",
        "pass",     "passes",    "passed",
        "sign",     "signs",     "signed",
        "meet",     "meets",     "met",
        "vote",     "votes",     "voted",
        "kill",     "kills",     "killed",
        "crash",    "crashes",   "crashed",
        "search",   "searches",  "searched",
        "find",     "finds",     "found",
        "move",     "moves",     "moved",
        "invade",   "invades",   "invaded",
        "seize",    "seizes",    "seized",
        "annex",    "annexes",   "annexed",
        "elect",    "elects",    "elected",
        "protest",  "protests",  "protested",
        "agree",    "agrees",    "agreed",
        "reject",   "rejects",   "rejected",
        "release",  "releases",  "released",
        "arrest",   "arrests",   "arrested",
        "ban",      "bans",      "banned",
        "order",    "orders",    "ordered",
        "threaten", "threatens", "threatened",
        "attack",   "attacks",   "attacked",
        "deploy",   "deploys",   "deployed",
        "expand",   "expands",   "expanded",
        "recover",  "recovers",  "recovered",
        "detect",   "detects",   "detected",
        "confirm",  "confirms",  "confirmed",
        "deny",     "denies",    "denied",
        "approve",  "approves",  "approved",
        "suspend",  "suspends",  "suspended",
        "resign",   "resigns",   "resigned",
        "strike",   "strikes",   "struck",
        "evacuate", "evacuates", "evacuated",
        "breach",   "breaches",  "breached",
        "flood",    "floods",    "flooded",   "flooding",
        "tour",     "tours",     "toured",
        "visit",    "visits",    "visited",
        "promise",  "promises",  "promised",
        "lift",     "lifts",     "lifted",
        "pump",     "pumps",     "pumped",
        "rebuild",  "rebuilds",  "rebuilt",   "rebuilding",
        "recede",   "recedes",   "receded",
        "inspect",  "inspects",  "inspected", "inspections",
        "blame",    "blames",    "blamed",
        "conclude", "concludes", "concluded",
        "appeal",   "appeals",   "appealed",
        "spread",   "spreads",
        "open",     "opens",     "opened",
        // event nouns
        "sanction", "sanctions", "election", "ceasefire", "referendum",
        "explosion", "eruption", "earthquake", "flood", "outbreak",
        "shooting", "summit", "treaty", "invasion", "annexation",
        "rescue", "aggression", "offensive", "airstrike", "blockade"};
    return words;
}

}  // namespace chronicle
