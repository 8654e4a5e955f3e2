import { describe, expect, it } from "vitest";

import type { AttributeInfo, SessionResource } from "../src/api.js";
import {
  attributeSpan,
  columnHeader,
  defaultScatterPair,
  eliminatedPlans,
  frontierCount,
  initialState,
  mergeBreadcrumb,
  sortedSurvivors,
  survivingPlans,
  validMatchValue,
  validProbability,
} from "../src/state.js";

function resource(): SessionResource {
  return {
    id: "abc",
    created: "",
    updated: "",
    session: {
      status: "active",
      columns: [
        { label: "DEATH", members: ["DEATH"], ratio_tree: null },
        {
          label: "BLEED/PE",
          members: ["BLEED", "PE"],
          ratio_tree: { ratio: 0.5, absorbed: { attribute: "BLEED" }, into: { attribute: "PE" } },
        },
      ],
      frontier: [0, 2],
      history: [
        {
          absorbed: "BLEED",
          surviving: "PE",
          absorbed_index: 1,
          surviving_index: 2,
          absorbed_representative: "BLEED",
          surviving_representative: "PE",
          ratio: 0.5,
          result_label: "BLEED/PE",
          answers: [],
        },
      ],
      pending_question: null,
      assessed_coefficients: {},
    },
    plans: [
      { id: 0, label: "first", w: [0.9, 0.2] },
      { id: 1, label: "second", w: [0.5, 0.1] },
      { id: 2, label: "third", w: [0.2, 0.9] },
    ],
    plan_labels: ["first", "second", "third"],
    attributes: [],
  };
}

describe("selectors", () => {
  it("derives the frontier count and plan partition from the service payload", () => {
    const r = resource();
    expect(frontierCount(r)).toBe(2);
    expect(survivingPlans(r).map((p) => p.label)).toEqual(["first", "third"]);
    expect(eliminatedPlans(r).map((p) => p.label)).toEqual(["second"]);
  });

  it("renders the merge breadcrumb with the ratio", () => {
    const crumbs = mergeBreadcrumb(resource());
    expect(crumbs).toHaveLength(1);
    expect(crumbs[0]!.text).toBe("BLEED/PE · ratio 0.5");
  });

  it("shows merge-group composition in column headers", () => {
    const r = resource();
    expect(columnHeader(r.session.columns[0]!)).toBe("DEATH");
    expect(columnHeader(r.session.columns[1]!)).toBe("BLEED/PE (BLEED, PE · ratio 0.5)");
  });

  it("defaults the scatter to the only pair of two active columns", () => {
    expect(defaultScatterPair(resource().session.columns)).toEqual([0, 1]);
  });

  it("sorts survivors by the chosen column, descending first", () => {
    const state = { ...initialState(), resource: resource(), sortColumn: 1 };
    expect(sortedSurvivors(state).map((p) => p.label)).toEqual(["third", "first"]);
    state.sortDescending = false;
    expect(sortedSurvivors(state).map((p) => p.label)).toEqual(["first", "third"]);
  });
});

describe("draft validation", () => {
  const attributes: AttributeInfo[] = [
    {
      name: "COST",
      kind: "continuous",
      worst: 50000,
      best: 0,
      subutility: { type: "piecewise_linear", points: [[0, 1], [50000, 0]] },
    },
  ];

  it("bounds probabilities to the unit interval", () => {
    expect(validProbability(0)).toBe(true);
    expect(validProbability(1)).toBe(true);
    expect(validProbability(1.2)).toBe(false);
    expect(validProbability(Number.NaN)).toBe(false);
  });

  it("bounds matching values to the attribute span", () => {
    expect(attributeSpan(attributes, "COST")).toEqual([0, 50000]);
    const question = {
      kind: "value_match" as const,
      text: "",
      match_attribute: "COST",
    };
    expect(validMatchValue(20000, attributes, question)).toBe(true);
    expect(validMatchValue(-5, attributes, question)).toBe(false);
    expect(validMatchValue(60000, attributes, question)).toBe(false);
  });
});
