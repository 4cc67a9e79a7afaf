"""Regenerates data/mini_corpus.csv, a small synthetic bibliographic export.

The corpus imitates a Scopus CSV export: 60 records over 2009-2022 whose
vocabulary drifts from classical statistics, through big-data analytics, to
machine learning. It is fully synthetic. Run from the repository root:

    python3 data/gen_mini_corpus.py
"""

import csv
import random

rng = random.Random(20221018)

PER_YEAR = {
    2009: 1, 2010: 1, 2011: 2, 2012: 2, 2013: 2, 2014: 2, 2015: 3,
    2016: 3, 2017: 4, 2018: 5, 2019: 6, 2020: 8, 2021: 10, 2022: 11,
}

COMMON = ("data science analysis paper model methods results approach "
          "research study information").split()
FILLER = ("the of and in a to for this we is are with on by from as "
          "an be which these our").split()
ERA = {
    "early": ("statistics statistical database databases mining survey "
              "knowledge discovery tukey curriculum computing inference "
              "exploratory visualization").split(),
    "growth": ("big analytics predictive process mining supply chain cloud "
               "hadoop management business decision genomics astronomy "
               "scalable platform").split(),
    "boom": ("machine learning deep neural convolutional training accuracy "
             "covid pandemic artificial intelligence strategy prediction "
             "networks classification").split(),
}
KEYWORDS = {
    "early": ["Statistics", "Data mining", "Databases"],
    "growth": ["Big data", "Predictive analytics", "Process mining", "Cloud computing"],
    "boom": ["Machine learning", "Deep learning", "COVID-19", "Artificial intelligence"],
}
TYPES = ["Conference Paper"] * 10 + ["Article"] * 7 + ["Review", "Book Chapter"]
PIONEERS = {
    2016: ("Process mining: Data science in action", 1164),
    2013: ("Data science, predictive analytics, and big data: A revolution that "
           "will transform supply chain design and management", 710),
    2015: ("Big data: Astronomical or genomical?", 668),
}


def era_of(year):
    if year <= 2012:
        return "early"
    if year <= 2018:
        return "growth"
    return "boom"


def abstract_for(era):
    n = rng.randint(24, 40)
    words = []
    for _ in range(n):
        r = rng.random()
        if r < 0.35:
            words.append(rng.choice(FILLER))
        elif r < 0.60:
            words.append(rng.choice(COMMON))
        elif r < 0.92:
            words.append(rng.choice(ERA[era]))
        else:
            other = rng.choice([e for e in ERA if e != era])
            words.append(rng.choice(ERA[other]))
    if rng.random() < 0.3:
        words.insert(rng.randrange(len(words)), str(rng.randint(10, 999)))
    text = " ".join(words)
    return text[0].upper() + text[1:] + "."


rows = []
serial = 0
special = {5: "Letter", 22: "Note", 41: "Editorial"}
empty_abstract = {17, 48}
for year, count in PER_YEAR.items():
    era = era_of(year)
    for k in range(count):
        serial += 1
        eid = f"2-s2.0-{84000000000 + serial * 7919}"
        if k == 0 and year in PIONEERS:
            title, cites = PIONEERS[year]
        else:
            topic = " ".join(rng.sample(ERA[era], 2)).title()
            title = f"{topic} in data science, a study {serial}"
            cites = rng.randint(0, 400 if era != "boom" else 120)
        doc_type = special.get(serial, rng.choice(TYPES))
        if serial == 30:
            doc_type = "Conference Review"
        if serial == 33:
            doc_type = "Book"
        abstract = "" if serial in empty_abstract else abstract_for(era)
        if serial == 9:
            abstract = 'We revisit "data science" as a field: statistics, computing, and ' + abstract
        kws = "; ".join(rng.sample(KEYWORDS[era], 2)) if rng.random() < 0.8 else ""
        rows.append([eid, title, abstract, kws, str(year), doc_type, str(cites)])

with open("data/mini_corpus.csv", "w", newline="", encoding="utf-8") as fh:
    w = csv.writer(fh, lineterminator="\n")
    w.writerow(["EID", "Title", "Abstract", "Author Keywords", "Year",
                "Document Type", "Cited by"])
    w.writerows(rows)
print(len(rows), "rows")
