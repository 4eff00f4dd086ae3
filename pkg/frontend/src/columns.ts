/** Grouping of graph nodes into the four model columns:
 * products & processes | required capabilities | resources (with their
 * provided capabilities and vendor-scoped causes) | global conditions & causes.
 */

import { GraphEdge, GraphNode, GraphPayload } from "./types.js";

export interface ResourceCard {
  resource: GraphNode;
  capabilities: GraphNode[];
  scopedCauses: GraphNode[];
}

export interface FourColumns {
  productsAndProcesses: GraphNode[];
  requiredCapabilities: GraphNode[];
  resources: ResourceCard[];
  /** Resource-scoped causes whose defining resource is missing from the payload. */
  orphanScopedCauses: GraphNode[];
  conditions: GraphNode[];
  globalCauses: GraphNode[];
}

const LEFT_KINDS = new Set([
  "ProductClass",
  "ProcessClass",
  "ProductInstance",
  "ProcessStepInstance",
]);

function byIri(nodes: GraphNode[]): Map<string, GraphNode> {
  return new Map(nodes.map((node) => [node.iri, node]));
}

function sortNodes(nodes: GraphNode[]): GraphNode[] {
  return [...nodes].sort((a, b) => (a.iri < b.iri ? -1 : a.iri > b.iri ? 1 : 0));
}

export function groupColumns(graph: GraphPayload): FourColumns {
  const nodes = byIri(graph.nodes);
  const definedBy = new Map<string, string>();
  const provides = new Map<string, string[]>();
  for (const edge of graph.edges) {
    if (edge.kind === "definesCause") {
      definedBy.set(edge.object, edge.subject);
    } else if (edge.kind === "providesCapability") {
      const list = provides.get(edge.subject) ?? [];
      list.push(edge.object);
      provides.set(edge.subject, list);
    }
  }

  const columns: FourColumns = {
    productsAndProcesses: [],
    requiredCapabilities: [],
    resources: [],
    orphanScopedCauses: [],
    conditions: [],
    globalCauses: [],
  };

  const resourceCards = new Map<string, ResourceCard>();
  for (const node of sortNodes(graph.nodes)) {
    if (node.kind === "Resource") {
      resourceCards.set(node.iri, { resource: node, capabilities: [], scopedCauses: [] });
    }
  }

  for (const node of sortNodes(graph.nodes)) {
    switch (node.kind) {
      case "Resource":
        break;
      case "RequiredCapability":
        columns.requiredCapabilities.push(node);
        break;
      case "UndesiredCondition":
        columns.conditions.push(node);
        break;
      case "PlausibleCause": {
        const owner = definedBy.get(node.iri);
        if (owner === undefined) {
          columns.globalCauses.push(node);
        } else {
          const card = resourceCards.get(owner);
          if (card) {
            card.scopedCauses.push(node);
          } else {
            columns.orphanScopedCauses.push(node);
          }
        }
        break;
      }
      case "ProvidedCapability":
        break; // attached to its resource card below
      default:
        if (LEFT_KINDS.has(node.kind)) {
          columns.productsAndProcesses.push(node);
        }
    }
  }

  for (const [resourceIri, capabilityIris] of provides) {
    const card = resourceCards.get(resourceIri);
    if (!card) continue;
    for (const capabilityIri of [...capabilityIris].sort()) {
      const capability = nodes.get(capabilityIri);
      if (capability) card.capabilities.push(capability);
    }
  }
  columns.resources = [...resourceCards.values()];
  return columns;
}

/** Edges touching one node, for the detail panel. */
export function nodeNeighborhood(
  graph: GraphPayload,
  iri: string,
): { out: GraphEdge[]; incoming: GraphEdge[] } {
  const out = graph.edges
    .filter((edge) => edge.subject === iri)
    .sort((a, b) => (a.kind + a.object).localeCompare(b.kind + b.object));
  const incoming = graph.edges
    .filter((edge) => edge.object === iri)
    .sort((a, b) => (a.kind + a.subject).localeCompare(b.kind + b.subject));
  return { out, incoming };
}
