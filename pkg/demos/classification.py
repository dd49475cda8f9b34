"""Classify the corpus polygons and compare them up to E-equivalence."""
import itertools

from polykit import corpus
from polykit.classify import classify_polygon, e_equivalent, projectively_equivalent


def main():
    tags = {}
    for name in corpus.polygons():
        c = classify_polygon(corpus.get(name))
        tags[name] = c
        print(f"{name:<16} {c}")
    balanced = [n for n, c in tags.items() if c.tag in "abcdef"]
    print("E-equivalent pairs:")
    for a, b in itertools.combinations(balanced, 2):
        if e_equivalent(corpus.get(a), corpus.get(b)) is not None:
            proj = projectively_equivalent(corpus.get(a), corpus.get(b))
            print(f"  {a} ~ {b}  (same normal fan: {proj})")


if __name__ == "__main__":
    main()
