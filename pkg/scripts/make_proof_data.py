"""Write the profile families and the replay scripts.

    python3 scripts/make_proof_data.py            # default sizes (odd n=5, even n=8)
    python3 scripts/make_proof_data.py --odd-n 7  # extra odd-n instance

Profiles are expanded from voter-group templates; output goes to profiles/ and proofs/.
"""
import argparse
import json
from pathlib import Path

from sdsaudit.prefs import Profile, parse_order, serialize_profile

ROOT = Path(__file__).resolve().parent.parent
ALTS5 = ("a", "b", "c", "d", "e")
ALTS4 = ("a", "b", "c", "d")


def build(orders, alts=ALTS5) -> Profile:
    return Profile(alts, tuple(parse_order(o, alts) for o in orders))


def override(orders, changes):
    out = list(orders)
    for voter, order in changes.items():
        out[voter - 1] = order
    return out


def write_profiles(folder: Path, profiles: dict, header: str = "", alts=ALTS5) -> dict:
    folder.mkdir(parents=True, exist_ok=True)
    paths = {}
    for name, orders in profiles.items():
        p = build(orders, alts)
        path = folder / f"{name}.txt"
        text = (f"# {header} {name}\n" if header else "") + serialize_profile(p)
        path.write_text(text, encoding="utf-8")
        paths[name] = path
    return paths


def rel(path: Path) -> str:
    return str(Path("..") / path.relative_to(ROOT))


# ----------------------------------------------------------------- odd n

def odd_profiles(n: int) -> dict:
    """Profiles for the odd-n even-chance impossibility; voter groups expanded for this n."""
    assert n >= 5 and n % 2 == 1
    h = (n + 3) // 2
    low = list(range(4, h + 1))      # voters 4..(n+3)/2
    high = list(range(h + 1, n + 1))  # voters (n+5)/2..n
    r1 = ["b,e,d,c,a", "a,b,c,e,d", "e,d,c,a,b"] + ["b,c,a,e,d"] * len(low) + ["e,d,a,b,c"] * len(high)
    rh1 = override(r1, {3: "d,a,e,b,c"})
    P = {"R1": r1, "Rhat1": rh1}
    P["R2"] = override(r1, {2: "b,a,c,e,d"})
    P["R3"] = override(r1, {1: "e,b,d,c,a"})
    # voters n, n-1, ... switch to a,e,d,b,c one after another
    cur = r1
    for k, v in enumerate(reversed(high), start=1):
        cur = override(cur, {v: "a,e,d,b,c"})
        P["R4" if k == 1 else f"R4_{k}"] = cur
    P["R5"] = cur
    P["R6"] = override(cur, {1: "b,e,d,a,c"})
    cur = r1
    for k, v in enumerate(low, start=1):
        cur = override(cur, {v: "c,b,a,e,d"})
        P["R7" if k == 1 else f"R7_{k}"] = cur
    P["R8"] = cur
    P["R9"] = override(cur, {2: "a,c,b,e,d"})
    P["R10"] = override(P["R9"], {3: "c,e,d,a,b"})
    P["Rhat2"] = override(rh1, {2: "b,a,c,e,d"})
    P["Rhat3"] = override(rh1, {3: "a,d,e,b,c"})
    cur = rh1
    for k, v in enumerate(low, start=1):
        cur = override(cur, {v: "d,b,c,a,e"})
        P["Rhat4" if k == 1 else f"Rhat4_{k}"] = cur
    P["Rhat5"] = cur
    P["Rhat6"] = override(cur, {n: "d,e,a,b,c"})
    P["Rhat7"] = override(rh1, {3: "d,e,a,b,c"})
    P["Rhat8"] = override(P["Rhat7"], {1: "e,b,d,c,a"})
    return P


# ----------------------------------------------------------------- even n

def even_profiles() -> dict:
    """n=8 profiles; {4,5,6} keep a,e,d,b,c in the second family (see notes)."""
    r1 = ["b,c,a,e,d"] * 3 + ["a,e,d,b,c"] * 3 + ["e,d,b,c,a", "e,d,c,b,a"]
    rh1 = override(r1, {8: "d,e,b,c,a"})
    P = {"R1": r1, "Rhat1": rh1}
    P["Rhat2"] = override(rh1, {6: "e,a,d,b,c"})
    P["Rhat3"] = override(P["Rhat2"], {5: "e,a,d,b,c"})
    P["Rhat4"] = override(P["Rhat3"], {4: "e,a,d,b,c"})
    # the symmetric case for {a,d,e}: voters 1 and 2 move to a,b,c,e,d
    P["Rhat1s1"] = override(rh1, {1: "a,b,c,e,d"})
    P["Rhat1s2"] = override(P["Rhat1s1"], {2: "a,b,c,e,d"})
    P["Rhat5"] = override(rh1, {7: "e,b,d,c,a"})
    P["Rhat6"] = override(P["Rhat5"], {6: "a,b,d,e,c"})
    P["Rhat7"] = override(P["Rhat6"], {7: "b,e,d,c,a"})
    P["Rhat8"] = override(rh1, {8: "d,b,e,c,a"})
    P["Rhat9"] = override(P["Rhat8"], {6: "a,b,e,d,c"})
    P["Rhat10"] = override(P["Rhat9"], {8: "b,d,e,c,a"})
    P["R2"] = override(r1, {8: "e,d,b,c,a"})
    P["R3"] = override(r1, {6: "e,a,d,b,c"})
    P["R4"] = override(P["R3"], {5: "e,a,d,b,c"})
    P["R5"] = override(P["R4"], {4: "e,a,d,b,c"})
    P["R6"] = override(r1, {1: "b,a,c,e,d"})
    P["R7"] = override(P["R6"], {2: "b,a,c,e,d"})
    P["R8"] = override(P["R7"], {1: "a,b,c,e,d"})
    P["R9"] = override(P["R8"], {2: "a,b,c,e,d"})
    P["R10"] = override(r1, {8: "e,d,c,a,b"})
    P["R11"] = override(P["R10"], {7: "e,d,a,b,c"})
    P["R12"] = override(P["R11"], {1: "b,e,a,c,d"})
    return P


# ------------------------------------------------------ pairwise + neutral

def pairwise_profiles() -> dict:
    return {
        "R1": ["a,b,e,d,c", "b,c,e,d,a", "e,d,c,a,b"],
        "R2": ["a,b,e,c,d", "b,c,e,a,d", "e,c,a,b,d"],
        "Rhat1": ["a,b,e,d,c", "b,c,e,d,a", "d,e,a,b,c"],
        "Rhat2": ["a,b,e,d,c", "b,e,d,a,c", "d,e,a,b,c"],
        "R3": ["a,b,e,c,d", "b,c,e,a,d", "e,a,c,b,d"],
        "R4": ["a,b,e,c,d", "b,c,a,e,d", "e,c,a,b,d"],
    }


def pairwise_script(paths) -> dict:
    return {
        "kind": "deduction",
        "name": "thm4",
        "description": "No pairwise, neutral, weakly strategyproof and ex post efficient rule for m=5, n=3.",
        "axioms": ["pairwise", "neutrality", "weak-sp", "ex-post"],
        "expect": "VERIFIED",
        "profiles": [{"name": k, "profile": rel(v)} for k, v in paths.items()],
        "steps": [
            {"kind": "ASSERT_PARETO", "profile": "R1", "dominated": ["d"], "by": ["e"]},
            {"kind": "ASSERT_PARETO", "profile": "R2", "dominated": ["d"], "by": ["e"]},
            {"kind": "ASSERT_PARETO", "profile": "Rhat1", "dominated": ["c"], "by": ["b"]},
            {"kind": "ASSERT_PARETO", "profile": "Rhat2", "dominated": ["c"], "by": ["b"]},
            {"kind": "FORCE_SET_MONOTONE", "source": "R1", "target": "R2", "alternative": "d"},
            {"kind": "FORCE_SET_MONOTONE", "source": "Rhat1", "target": "Rhat2", "alternative": "c"},
            {"kind": "FORCE_NEUTRAL_ISO", "source": "R2", "target": "Rhat2"},
            {"kind": "FORCE_SP", "truthful": "R1", "deviant": "Rhat1", "voter": 3,
             "profile": "R1", "claim": "c = 0"},
            {"kind": "FORCE_SET_MONOTONE", "source": "R2", "target": "R3", "alternative": "c"},
            {"kind": "FORCE_NEUTRAL_ISO", "source": "R3", "target": "R3",
             "alternatives": {"a": "b", "b": "e", "e": "a"}},
            {"kind": "ASSERT_VALUE", "profile": "R3", "claim": "a = 1/3 & b = 1/3 & e = 1/3"},
            {"kind": "ASSERT_VALUE", "profile": "R2", "claim": "a = 1/3 & b = 1/3 & e = 1/3"},
            {"kind": "FORCE_NEUTRAL_ISO", "source": "R2", "target": "R4"},
            {"kind": "ASSERT_VALUE", "profile": "R4", "claim": "a = 1/3 & b = 1/3 & c = 1/3"},
            {"kind": "CONTRADICTION", "truthful": "R2", "deviant": "R4", "voter": 2},
        ],
    }


# ----------------------------------------------------- weak preferences

def weak_profiles() -> dict:
    return {
        "R1": ["{b,c},{a,d}", "{a,d},{b,c}", "{a,b},c,d", "{c,d},a,b"],
        "R2": ["{b,c},{a,d}", "{a,d},{b,c}", "{a,b},c,d", "c,{a,d},b"],
        "R3": ["{b,c},{a,d}", "{a,d},{b,c}", "b,a,{c,d}", "c,{a,d},b"],
        "R4": ["{b,c},{a,d}", "{a,d},{b,c}", "b,a,{c,d}", "c,d,{a,b}"],
        "R5": ["{b,c},d,a", "{a,d},{b,c}", "b,a,{c,d}", "c,d,{a,b}"],
        "R6": ["{b,c},d,a", "d,{a,b},c", "b,a,{c,d}", "c,d,{a,b}"],
        "R7": ["{a,b},{c,d}", "{c,d},{a,b}", "{a,c},b,d", "{b,d},c,a"],
        "R8": ["{a,b},{c,d}", "{c,d},{a,b}", "{a,d},b,c", "{b,c},d,a"],
        "R9": ["{a,b},{c,d}", "{c,d},{a,b}", "{b,c},d,a", "{b,d},c,a"],
        "R10": ["{a,b},{c,d}", "c,d,{a,b}", "{b,c},d,a", "{b,d},c,a"],
        "R11": ["b,a,{c,d}", "c,d,{a,b}", "{b,c},d,a", "{b,d},c,a"],
        "R12": ["{b,c},d,a", "d,{a,b},c", "{a,b},{c,d}", "c,d,{a,b}"],
        "R13": ["{b,c},d,a", "d,{a,b},c", "{a,b},{c,d}", "{c,d},{a,b}"],
    }


def weak_script(paths) -> dict:
    sp = lambda tru, dev, voter, prof, claim: {  # noqa: E731
        "kind": "FORCE_SP", "truthful": tru, "deviant": dev, "voter": voter, "profile": prof, "claim": claim}
    return {
        "kind": "deduction",
        "name": "thm5",
        "description": "No anonymous, neutral, SD-efficient and weakly strategyproof rule for m=n=4.",
        "axioms": ["anonymity", "neutrality", "sd-efficiency", "weak-sp", "ex-post"],
        "expect": "VERIFIED",
        "profiles": [{"name": k, "profile": rel(v)} for k, v in paths.items()],
        "steps": [
            # step 1
            {"kind": "FORCE_SYMMETRY", "source": "R1", "target": "R1",
             "alternatives": {"a": "c", "c": "a", "b": "d", "d": "b"}},
            {"kind": "FORCE_EFFICIENCY", "profile": "R1", "claim": "b = 0 & d = 0",
             "certificate": {"a": "1/2", "c": "1/2"}},
            {"kind": "ASSERT_VALUE", "profile": "R1", "claim": "a = 1/2 & c = 1/2"},
            sp("R2", "R1", 4, "R2", "c >= 1/2"),
            {"kind": "ASSERT_PARETO", "profile": "R2", "dominated": ["d"], "by": ["a"]},
            {"kind": "ASSERT_PARETO", "profile": "R3", "dominated": ["d"], "by": ["a"]},
            sp("R2", "R3", 3, "R3", "a + b <= 1/2"),
            {"kind": "ASSERT_VALUE", "profile": "R3", "claim": "c >= 1/2"},
            {"kind": "FORCE_SYMMETRY", "source": "R4", "target": "R4",
             "alternatives": {"b": "c", "c": "b", "a": "d", "d": "a"}},
            sp("R4", "R3", 4, "R4", "c >= 1/2"),
            {"kind": "ASSERT_VALUE", "profile": "R4", "claim": "b = 1/2 & c = 1/2"},
            sp("R5", "R4", 1, "R5", "b + c = 1"),
            sp("R5", "R6", 2, "R6", "b + c = 1"),
            # step 2
            {"kind": "FORCE_SYMMETRY", "source": "R1", "target": "R7",
             "alternatives": {"a": "c", "b": "a", "c": "b", "d": "d"}},
            {"kind": "FORCE_SYMMETRY", "source": "R1", "target": "R8",
             "alternatives": {"a": "d", "b": "a", "c": "b", "d": "c"}},
            {"kind": "ASSERT_VALUE", "profile": "R7", "claim": "b = 1/2 & c = 1/2"},
            {"kind": "ASSERT_VALUE", "profile": "R8", "claim": "b = 1/2 & d = 1/2"},
            sp("R9", "R7", 3, "R9", "b + c = 1"),
            sp("R9", "R8", 4, "R9", "b + d = 1"),
            {"kind": "ASSERT_VALUE", "profile": "R9", "claim": "b = 1"},
            {"kind": "ASSERT_PARETO", "profile": "R10", "dominated": ["a"], "by": ["b"]},
            sp("R9", "R10", 2, "R10", "b = 1"),
            sp("R11", "R10", 1, "R11", "b = 1"),
            sp("R6", "R11", 2, "R6", "c = 0"),
            {"kind": "ASSERT_VALUE", "profile": "R6", "claim": "b = 1"},
            # step 3
            {"kind": "ASSERT_PARETO", "profile": "R12", "dominated": ["a"], "by": ["b"]},
            sp("R12", "R6", 3, "R12", "b = 1"),
            {"kind": "ASSERT_PARETO", "profile": "R13", "dominated": ["a"], "by": ["b"]},
            sp("R12", "R13", 4, "R13", "b = 1"),
            {"kind": "ASSERT_VALUE", "profile": "R13", "claim": "b = 1"},
            {"kind": "CONTRADICTION", "truthful": "R13", "deviant": "R8", "voter": 2},
        ],
    }


def csp_script(name, paths, unaries, lemma_unaries, chain_lemmas, description) -> dict:
    return {
        "kind": "csp",
        "name": name,
        "description": description,
        "expect": "UNSAT",
        "nodes": [{"name": k, "profile": rel(v)} for k, v in paths.items()],
        "unaries": unaries,
        "lemma_unaries": lemma_unaries,
        "chain_lemmas": chain_lemmas,
        "edges": "auto",
        "modes": ["unary", "chains"],
    }


def small_examples():
    files = {
        "cycle3.txt": "# majority cycle a > b > c > a\nalts: a b c\n1: a,b,c\n2: b,c,a\n3: c,a,b\n",
        "cw3.txt": "# a is the Condorcet winner\nalts: a b c\n1: a,b,c\n2: b,a,c\n3: a,c,b\n",
        "weak_pair.txt": "# two voters with ties\nalts: a b c\n1: {a,b},c\n2: b,a,c\n",
    }
    for k, v in files.items():
        (ROOT / "profiles" / k).write_text(v, encoding="utf-8")


def dump(name, data):
    (ROOT / "proofs").mkdir(exist_ok=True)
    (ROOT / "proofs" / f"{name}.json").write_text(json.dumps(data, indent=2) + "\n", encoding="utf-8")


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--odd-n", type=int, default=5)
    args = ap.parse_args()
    odd = f"thm3_n{args.odd_n}"
    paths = write_profiles(ROOT / "profiles" / odd, odd_profiles(args.odd_n), f"odd n={args.odd_n}:")
    dump(odd, csp_script(odd, paths, ["EX_POST", "CONDORCET", "LEMMA1_ONLY_CW", "LEMMA2_NO_UNTIED_PAIRS"],
                         ["LEMMA1_ONLY_CW", "LEMMA2_NO_UNTIED_PAIRS"], ["LEMMA1", "LEMMA2"],
                         f"Even-chance, weakly strategyproof, Condorcet-consistent, ex post efficient; "
                         f"m=5, n={args.odd_n}."))
    if args.odd_n == 5:
        paths = write_profiles(ROOT / "profiles" / "prop_even_n8", even_profiles(), "even n=8:")
        dump("prop_even_n8", csp_script(
            "prop_even_n8", paths, ["EX_POST", "STRONG_CC", "LEMMA2_NO_UNTIED_PAIRS"],
            ["LEMMA2_NO_UNTIED_PAIRS"], ["LEMMA2"],
            "Even-chance, weakly strategyproof, strongly Condorcet-consistent, ex post efficient; m=5, n=8."))
        paths = write_profiles(ROOT / "profiles" / "thm4", pairwise_profiles(), "pairwise, m=5 n=3:")
        dump("thm4", pairwise_script(paths))
        paths = write_profiles(ROOT / "profiles" / "thm5", weak_profiles(), "weak, m=4 n=4:", ALTS4)
        dump("thm5", weak_script(paths))
        small_examples()


if __name__ == "__main__":
    main()
