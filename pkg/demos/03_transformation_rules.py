"""
Ordering rules between construction classes
===========================================

For each metaphor record the year each incoming-arc class first shows up,
then count across metaphors how often one class precedes another.
"""

from importlib.resources import files

from metasoc.constructions import cluster
from metasoc.corpus import extract_instances, read_corpus
from metasoc.rules import apply_rules_report, class_timeline, mine_rules, rules_report
from metasoc.synthetic import PLANS

corpus = read_corpus(files("metasoc") / "data" / "synthetic_200.conllu")
timelines = [class_timeline(cluster(extract_instances(corpus, lemma))) for lemma in sorted(PLANS)]
for t in timelines:
    print(f"{t.lemma:<11}", dict(t.class_foys))

# support must exceed 5 metaphors and P(consequent | antecedent) reach 0.8
rules = mine_rules(timelines)
print()
print(rules_report(rules))

# with the filters off, every pair with any support appears
print(rules_report(mine_rules(timelines, 0, 0.0)))

# which metaphors break the rule?
for t in timelines:
    for pred in apply_rules_report(rules, t):
        if pred.violated:
            print(f"{t.lemma} violates {pred.rule}: {pred.antecedent_year} vs {pred.consequent_year}")
