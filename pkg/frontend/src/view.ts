/**
 * Framework-free DOM view: engine selector, query box, tab strip, the cell
 * grid, color bar, title list, reading pane, and run export. All state
 * lives in the controller; this module only renders and forwards events.
 */

import { EMPTY_CELL_COLOR, cellColor, colorBarStops } from "./colors.js";
import type { DocMapSession } from "./controller.js";

export function mountDocMap(root: HTMLElement, controller: DocMapSession): void {
  root.innerHTML = "";
  root.classList.add("docmap");

  const toolbar = el("div", "docmap-toolbar");
  const engineSelect = el("select", "docmap-engines") as HTMLSelectElement;
  const queryInput = el("input", "docmap-query") as HTMLInputElement;
  queryInput.placeholder = "type query words";
  const searchButton = button("Search", async () => {
    if (queryInput.value.trim()) {
      await guard(() => controller.search(engineSelect.value, queryInput.value));
    }
  });
  const exportButton = button("Export run", async () => {
    await guard(async () => {
      const run = await controller.exportRun();
      offerDownload(`${run.query_id}.run`, run.run);
    });
  });
  toolbar.append(engineSelect, queryInput, searchButton, exportButton);

  const notice = el("div", "docmap-notice");
  const tabStrip = el("div", "docmap-tabs");
  const colorBar = el("div", "docmap-colorbar");
  const grid = el("div", "docmap-grid");
  const titles = el("ol", "docmap-titles");
  const reader = el("pre", "docmap-reader");
  root.append(toolbar, notice, tabStrip, colorBar, grid, titles, reader);

  const guard = async (action: () => Promise<unknown>) => {
    try {
      await action();
    } catch (error) {
      notice.textContent = String(error);
    }
  };

  controller.onChange = () => {
    engineSelect.innerHTML = "";
    for (const engine of controller.engines) {
      const option = document.createElement("option");
      option.value = engine.id;
      option.textContent = `${engine.name} (${engine.kind})`;
      engineSelect.append(option);
    }
    if (!controller.state) {
      return;
    }
    const model = controller.render();
    notice.textContent = controller.notices.at(-1) ?? "";

    tabStrip.innerHTML = "";
    for (const tab of model.tabs) {
      const tabButton = button(tab.label, () => void controller.selectTab(tab.id));
      tabButton.className = "docmap-tab" + (tab.active ? " active" : "");
      tabButton.style.borderBottom = `4px solid ${cellColor(tab.hue, 1)}`;
      tabStrip.append(tabButton);
    }

    colorBar.innerHTML = "";
    colorBar.title = "brightness scale: minimum to maximum similarity";
    for (const stop of colorBarStops(model.colorBar.hue)) {
      const chip = el("span", "docmap-colorchip");
      chip.style.background = stop;
      colorBar.append(chip);
    }

    const cols = controller.state.bundle.grid.cols;
    grid.style.display = "grid";
    grid.style.gridTemplateColumns = `repeat(${cols}, 1.6em)`;
    grid.innerHTML = "";
    for (const cell of model.cells) {
      const cellDiv = el("div", "docmap-cell");
      if (cell.docId === null) {
        cellDiv.style.background = EMPTY_CELL_COLOR;
      } else {
        cellDiv.style.background = cellColor(cell.hue ?? 0, cell.brightness ?? 0);
        cellDiv.title = `#${cell.rank} ${cell.title}`;
        if (cell.pressed) {
          cellDiv.classList.add("pressed");
        }
        if (cell.clusterMember && cell.clusterHue !== null) {
          cellDiv.style.outline = `3px solid ${cellColor(cell.clusterHue, 1)}`;
        }
        cellDiv.onclick = () => void guard(() => controller.clickCell(cell.row, cell.col));
        cellDiv.ondblclick = () =>
          void guard(async () => {
            const doc = await controller.fetchDocument(cell.docId!);
            reader.textContent = `${doc.title}\n\n${doc.body}`;
          });
      }
      grid.append(cellDiv);
    }

    titles.innerHTML = "";
    for (const title of model.titles) {
      const item = el("li", "docmap-title");
      item.textContent = title.title;
      if (title.examined) {
        item.classList.add("examined");
        item.style.background = "hsl(0, 0%, 85%)";
      }
      if (title.pressed) {
        item.classList.add("pressed");
        item.style.fontWeight = "bold";
      }
      item.onclick = () =>
        void guard(async () => {
          const doc = await controller.fetchDocument(title.docId);
          reader.textContent = `${doc.title}\n\n${doc.body}`;
        });
      titles.append(item);
    }
  };
}

function el(tag: string, className: string): HTMLElement {
  const node = document.createElement(tag);
  node.className = className;
  return node;
}

function button(label: string, onClick: () => void): HTMLButtonElement {
  const node = document.createElement("button");
  node.textContent = label;
  node.onclick = onClick;
  return node;
}

function offerDownload(filename: string, content: string): void {
  const blob = new Blob([content], { type: "text/plain" });
  const link = document.createElement("a");
  link.href = URL.createObjectURL(blob);
  link.download = filename;
  link.click();
  URL.revokeObjectURL(link.href);
}
