"""Synthetic corpus generation with planted, known-by-construction features.

Each plant sentence declares exactly the features its text triggers, so a
generated case's ground truth is the merge of its plants. The generator is
fully seeded and therefore reproducible.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field

from caselens.batcher import MONTHS
from caselens.records import EvidenceStorage, FeatureSet


@dataclass(frozen=True)
class Plant:
    sentence: str
    ints: dict = field(default_factory=dict)        # field -> int value
    tags: dict = field(default_factory=dict)        # field -> set of tags
    rso: bool = False
    relationship: str | None = None
    storage: tuple | None = None                    # (magnitude, unit)
    jail: str | None = None
    charges: tuple = ()
    gender: str | None = None
    victim_ages: tuple = ()
    span_paths: tuple = ()                          # feature paths that must carry a span


PLANTS = [
    Plant(
        "The 34-year-old suspect was taken into custody.",
        ints={"perpetrator_age": 34},
        span_paths=("perpetrator_age",),
    ),
    Plant(
        "Officers arrested the suspect at his home.",
        tags={"prosecution": {"arrested"}},
        span_paths=("prosecution.arrested",),
    ),
    Plant(
        "He was booked into the county facility.",
        tags={"prosecution": {"booked"}},
        span_paths=("prosecution.booked",),
    ),
    Plant(
        "He was charged with aggravated offenses.",
        tags={"prosecution": {"charged"}},
        charges=("aggravated offenses",),
        span_paths=("prosecution.charged", "charges"),
    ),
    Plant(
        "Contact began on Facebook where the two exchanged notes.",
        tags={"platforms": {"facebook"}},
        span_paths=("platforms.facebook",),
    ),
    Plant(
        "Material moved through Snapchat accounts.",
        tags={"platforms": {"snapchat"}},
        span_paths=("platforms.snapchat",),
    ),
    Plant(
        "He met the minor in an online chat room.",
        tags={"platforms": {"online", "chat"}, "case_topics": {"online_digital"}},
        span_paths=("platforms.online", "platforms.chat", "case_topics.online_digital"),
    ),
    Plant(
        "Investigators identified 3 victims in the case.",
        ints={"victim_count": 3},
        span_paths=("victim_count",),
    ),
    Plant(
        "The 12-year-old victim reported the abuse to detectives.",
        victim_ages=(12,),
        span_paths=("victim_ages",),
    ),
    Plant(
        "The girl reported the incident to a teacher.",
        gender="female",
        span_paths=("victim_gender",),
    ),
    Plant(
        "The suspect was a registered sex offender.",
        rso=True,
        span_paths=("registered_sex_offender",),
    ),
    Plant(
        "The material involved an infant.",
        tags={"severity_indicators": {"infant"}},
        span_paths=("severity_indicators.infant",),
    ),
    Plant(
        "The sexual assault occurred repeatedly.",
        tags={"severity_indicators": {"sexual_assault"}},
        span_paths=("severity_indicators.sexual_assault",),
    ),
    Plant(
        "The victim was 7 years old.",
        tags={"severity_indicators": {"under_10"}},
        span_paths=("severity_indicators.under_10",),
    ),
    Plant(
        "He produced explicit material.",
        tags={"case_topics": {"production"}, "severity_indicators": {"production"}},
        span_paths=("case_topics.production", "severity_indicators.production"),
    ),
    Plant(
        "He downloaded illegal files.",
        tags={"case_topics": {"possession"}},
        span_paths=("case_topics.possession",),
    ),
    Plant(
        "The abuse involved physical contact.",
        tags={"case_topics": {"hands_on"}},
        span_paths=("case_topics.hands_on",),
    ),
    Plant(
        "The suspect was the victim's uncle.",
        tags={"case_topics": {"family"}},
        relationship="uncle",
        span_paths=("case_topics.family", "relationship_to_victim.uncle"),
    ),
    Plant(
        "The suspect was a stranger to the child.",
        tags={"case_topics": {"stranger"}},
        span_paths=("case_topics.stranger",),
    ),
    Plant(
        "A proactive investigation revealed the activity.",
        tags={"investigation_type": {"proactive"}},
        span_paths=("investigation_type.proactive",),
    ),
    Plant(
        "An undercover operation confirmed the reports.",
        tags={"investigation_type": {"undercover"}},
        span_paths=("investigation_type.undercover",),
    ),
    Plant(
        "The FBI assisted with forensic analysis.",
        tags={"agencies": {"FBI"}},
        span_paths=("agencies.FBI",),
    ),
    Plant(
        "Detectives from AZICAC led the case.",
        tags={"agencies": {"AZICAC"}},
        span_paths=("agencies.AZICAC",),
    ),
    Plant(
        "A search recovered 1,200 images from seized devices.",
        ints={"evidence_images": 1200},
        span_paths=("evidence_images",),
    ),
    Plant(
        "Analysts recovered 1.5 TB of material.",
        storage=(1.5, "TB"),
        span_paths=("evidence_storage",),
    ),
    Plant(
        "They located 45 videos on the laptop.",
        ints={"evidence_videos": 45},
        span_paths=("evidence_videos",),
    ),
    Plant(
        "Witnesses described him as dangerous and out of control.",
        tags={"severity_phrases": {"dangerous", "out_of_control"}},
        span_paths=("severity_phrases.dangerous", "severity_phrases.out_of_control"),
    ),
    Plant(
        "He stated that he would continue.",
        tags={"severity_phrases": {"stated", "continue"}},
        span_paths=("severity_phrases.stated", "severity_phrases.continue"),
    ),
    Plant(
        "He was sentenced to 15 years in prison.",
        jail="15 years in prison",
        span_paths=("jail_info",),
    ),
]


@dataclass
class PlantedCase:
    month: str
    year: str
    expected: FeatureSet
    span_paths: set[str]
    text: str


@dataclass
class Corpus:
    document: str
    org: str
    year: str
    cases: list[PlantedCase]


def _merge(plants: list[Plant], year: str, month: str, seq: int) -> PlantedCase:
    fs = FeatureSet()
    paths: set[str] = set()
    for plant in plants:
        for fld, value in plant.ints.items():
            setattr(fs, fld, value)
        for fld, tags in plant.tags.items():
            if fld == "investigation_type":
                fs.investigation_type = (fs.investigation_type or set()) | tags
            else:
                getattr(fs, fld).update(tags)
        if plant.rso:
            fs.registered_sex_offender = True
        if plant.relationship:
            fs.relationship_to_victim = plant.relationship
        if plant.storage:
            fs.evidence_storage = EvidenceStorage(*plant.storage)
        if plant.jail:
            fs.jail_info = plant.jail
        fs.charges.extend(plant.charges)
        if plant.gender:
            fs.victim_gender = plant.gender
        fs.victim_ages.update(plant.victim_ages)
        paths.update(plant.span_paths)
    sentences = " ".join(p.sentence for p in plants)
    text = f"In {month} of {year}, the task force opened case file {seq}. {sentences}"
    return PlantedCase(month=month, year=year, expected=fs, span_paths=paths, text=text)


def _pick_plants(rng: random.Random, k: int) -> list[Plant]:
    """k plants with at most one per exclusive scalar field."""
    chosen: list[Plant] = []
    used_scalars: set[str] = set()
    candidates = list(PLANTS)
    rng.shuffle(candidates)
    for plant in candidates:
        scalars = set(plant.ints)
        if plant.storage:
            scalars.add("evidence_storage")
        if plant.jail:
            scalars.add("jail_info")
        if plant.gender:
            scalars.add("victim_gender")
        if plant.relationship:
            scalars.add("relationship_to_victim")
        if scalars & used_scalars:
            continue
        chosen.append(plant)
        used_scalars |= scalars
        if len(chosen) == k:
            break
    return chosen


def make_corpus(n_cases: int, seed: int = 0, org: str = "AZICAC", year: str = "2012") -> Corpus:
    rng = random.Random(seed)
    cases = []
    for i in range(n_cases):
        month = MONTHS[i % 12]
        plants = _pick_plants(rng, rng.randint(2, 5))
        cases.append(_merge(plants, year, month, i + 1))
    document = f"{org} ANNUAL SUMMARY\n\n" + "\n\n".join(c.text for c in cases)
    return Corpus(document=document, org=org, year=year, cases=cases)


def random_featureset(rng: random.Random) -> FeatureSet:
    """Random but vocabulary-valid FeatureSet for oracle comparisons."""

    def subset(vocab, max_n):
        n = rng.randint(0, max_n)
        return set(rng.sample(sorted(vocab), min(n, len(vocab))))

    platforms = subset({"facebook", "instagram", "snapchat", "discord", "whatsapp", "online", "chat"}, 3)
    topics = subset(
        {"production", "possession", "international", "multi_state", "hands_on",
         "online_digital", "family", "stranger", "pornography"},
        4,
    )
    severity = subset({"infant", "very_young", "under_10", "sexual_assault", "production"}, 3)
    phrases = subset({"dangerous", "stated", "told", "continue", "attacked", "out_of_control"}, 3)
    investigation = subset({"proactive", "reactive", "online", "undercover"}, 2)
    agencies = subset({"AZICAC", "FBI", "Phoenix Police", "ICAC", "HSI"}, 2)

    relationship = "stranger"
    if rng.random() < 0.3:
        relationship = rng.choice(["father", "mother", "uncle", "family member"])

    storage = None
    if rng.random() < 0.3:
        storage = EvidenceStorage(rng.choice([0.5, 1.5, 2.0, 250.0]), rng.choice(["GB", "TB"]))

    return FeatureSet(
        perpetrator_age=rng.choice([None, rng.randint(18, 80)]),
        registered_sex_offender=rng.random() < 0.2,
        relationship_to_victim=relationship,
        victim_count=rng.choice([None, rng.randint(1, 9)]),
        victim_ages={rng.randint(0, 17) for _ in range(rng.randint(0, 3))},
        victim_gender=rng.choice([None, "female", "male"]),
        platforms=platforms,
        investigation_type=investigation or None,
        agencies=agencies,
        prosecution=subset({"booked", "arrested", "charged"}, 2),
        charges=[],
        jail_info=None,
        evidence_images=rng.choice([None, rng.randint(1, 5000)]),
        evidence_videos=rng.choice([None, rng.randint(1, 500)]),
        evidence_storage=storage,
        evidence_messages=rng.choice([None, rng.randint(1, 9000)]),
        severity_indicators=severity,
        case_topics=topics,
        severity_phrases=phrases,
    )
