import * as echarts from 'echarts';

export interface Series {
  name: string;
  points: Array<[number, number]>;
  step?: boolean;
}

export interface ChartSpec {
  title: string;
  xLabel: string;
  yLabel: string;
  series: Series[];
}

const WIDTH = 800;
const HEIGHT = 500;

function toOption(spec: ChartSpec): echarts.EChartsCoreOption {
  return {
    animation: false,
    backgroundColor: '#ffffff',
    title: { text: spec.title, left: 'center' },
    grid: { left: 70, right: 30, top: 60, bottom: 55 },
    legend: spec.series.length > 1
      ? { bottom: 5, data: spec.series.map((s) => s.name) }
      : undefined,
    xAxis: { type: 'value', name: spec.xLabel, nameLocation: 'middle', nameGap: 30 },
    yAxis: { type: 'value', name: spec.yLabel, nameLocation: 'middle', nameGap: 45 },
    series: spec.series.map((s) => ({
      name: s.name,
      type: 'line',
      showSymbol: false,
      step: s.step ? 'end' : undefined,
      data: s.points,
    })),
  };
}

/** Render a chart spec to an SVG string (server-side, no DOM). */
export function renderSvg(spec: ChartSpec): string {
  const chart = echarts.init(null, null, {
    renderer: 'svg',
    ssr: true,
    width: WIDTH,
    height: HEIGHT,
  });
  chart.setOption(toOption(spec));
  const svg = chart.renderToSVGString();
  chart.dispose();
  return svg;
}
