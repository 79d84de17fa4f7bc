// View state: which facet is open, which signal groups are activated, and
// what timeline node is hovered. With zero activated groups the table
// renders snippet titles only. All of it is presentational; no state
// transition here ever talks to the network.

import type { FacetName } from "./types";

export interface HoverTarget {
  kind: "query" | "page";
  shade: number;
}

export class ViewState {
  activeFacet: FacetName = "context";
  activatedGroups = new Set<string>();
  hoverTarget: HoverTarget | null = null;
  pendingAdjustments = 0;

  selectFacet(facet: FacetName): void {
    this.activeFacet = facet;
  }

  toggleGroup(name: string): boolean {
    if (this.activatedGroups.has(name)) {
      this.activatedGroups.delete(name);
      return false;
    }
    this.activatedGroups.add(name);
    return true;
  }

  isActivated(name: string): boolean {
    return this.activatedGroups.has(name);
  }

  get cleanTable(): boolean {
    return this.activatedGroups.size === 0;
  }

  setHover(target: HoverTarget | null): void {
    this.hoverTarget = target;
  }
}
