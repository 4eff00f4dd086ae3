/** Console view state: current graph version, selection, per-panel staleness.
 *
 * Every envelope carries graph_version; a panel renders only data whose
 * version matches the latest one seen, otherwise it is flagged stale so the
 * operator refreshes before acting on it.
 */

export type Panel = "graph" | "matching" | "schedule" | "diagnosis";

export const PANELS: Panel[] = ["graph", "matching", "schedule", "diagnosis"];

export class ViewState {
  currentVersion = 0;
  selectedNode: string | null = null;
  activePanel: Panel = "graph";
  private panelVersions = new Map<Panel, number>();

  /** Record a graph_version seen on any response; versions never go back. */
  noteServerVersion(version: number): void {
    if (version > this.currentVersion) {
      this.currentVersion = version;
    }
  }

  /** Record that a panel rendered data from the given version. */
  notePanelLoaded(panel: Panel, version: number): void {
    this.panelVersions.set(panel, version);
    this.noteServerVersion(version);
  }

  panelVersion(panel: Panel): number | undefined {
    return this.panelVersions.get(panel);
  }

  /** Stale: the panel holds data from before the latest known version. */
  isStale(panel: Panel): boolean {
    const loaded = this.panelVersions.get(panel);
    return loaded !== undefined && loaded < this.currentVersion;
  }

  stalePanels(): Panel[] {
    return PANELS.filter((panel) => this.isStale(panel));
  }
}
